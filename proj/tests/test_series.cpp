#include "shiftbench/csv.hpp"
#include "shiftbench/rng.hpp"
#include "shiftbench/series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

using namespace shiftbench;

namespace {

PerformanceMatrix matrix(std::vector<std::vector<double>> rows) {
    auto seeds = default_seeds(rows.size());
    return PerformanceMatrix(std::move(seeds), std::move(rows));
}

PerformanceMatrix random_matrix(SplitMix64& rng, std::size_t m, std::size_t n, double scale = 100.0) {
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (auto& r : rows) {
        for (double& v : r) v = scale * (2.0 * rng.uniform01() - 1.0);
    }
    return matrix(std::move(rows));
}

} // namespace

TEST_CASE("PerformanceMatrix rejects malformed input", "[series]") {
    CHECK_THROWS_AS(PerformanceMatrix({}, {}), ValidationError);
    CHECK_THROWS_AS(matrix({{}}), ValidationError);
    CHECK_THROWS_AS(matrix({{1, 2}, {3}}), ValidationError);
    CHECK_THROWS_AS(PerformanceMatrix({SeedId{1}, SeedId{1}}, {{1}, {2}}), ValidationError);
    CHECK_THROWS_AS(PerformanceMatrix({SeedId{1}}, {{1}, {2}}), ValidationError);
    CHECK_THROWS_AS(matrix({{1, std::numeric_limits<double>::quiet_NaN()}}), ValidationError);
    CHECK_THROWS_AS(matrix({{std::numeric_limits<double>::infinity()}}), ValidationError);
}

TEST_CASE("aggregate_mean examples", "[series]") {
    CHECK(aggregate_mean(matrix({{1, 2}, {3, 4}})).values == std::vector<double>{2, 3});
    CHECK(aggregate_mean(matrix({{5, 5, 5}})).values == std::vector<double>{5, 5, 5});
    CHECK(aggregate_mean(matrix({{0, 10}, {10, 0}, {5, 5}, {5, 5}})).values == std::vector<double>{5, 5});
}

TEST_CASE("aggregate_mean is linear", "[series][property]") {
    SplitMix64 rng(stream_key({7, tag_hash("linearity")}));
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(6), n = 1 + rng.uniform_index(30);
        const auto a = random_matrix(rng, m, n), b = random_matrix(rng, m, n);
        const double ca = 4.0 * rng.uniform01() - 2.0, cb = 4.0 * rng.uniform01() - 2.0;
        std::vector<std::vector<double>> combined(m, std::vector<double>(n));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t t = 0; t < n; ++t) combined[i][t] = ca * a.at(i, t) + cb * b.at(i, t);
        }
        const auto lhs = aggregate_mean(matrix(combined)).values;
        const auto ma = aggregate_mean(a).values, mb = aggregate_mean(b).values;
        for (std::size_t t = 0; t < n; ++t) {
            CHECK(lhs[t] == Catch::Approx(ca * ma[t] + cb * mb[t]).margin(1e-9));
        }
    }
}

TEST_CASE("rolling_mean examples", "[series]") {
    CHECK(rolling_mean({{1, 2, 3}, ""}, 2).values == std::vector<double>{1, 1.5, 2.5});
    CHECK(rolling_mean({{7, 7, 7, 7}, ""}, 3).values == std::vector<double>{7, 7, 7, 7});
    CHECK(rolling_mean({{3.25}, ""}, 25).values == std::vector<double>{3.25});
    CHECK_THROWS_AS(rolling_mean({{1, 2}, ""}, 0), ValidationError);
}

TEST_CASE("rolling_mean properties", "[series][property]") {
    SplitMix64 rng(stream_key({11, tag_hash("rolling")}));
    for (int trial = 0; trial < 200; ++trial) {
        MeanSeries s;
        const std::size_t n = 1 + rng.uniform_index(60);
        for (std::size_t t = 0; t < n; ++t) s.values.push_back(50.0 * rng.uniform01() - 25.0);
        CHECK(rolling_mean(s, 1).values == s.values);
        const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
        const auto r = rolling_mean(s, 1 + rng.uniform_index(30));
        REQUIRE(r.size() == n);
        for (double v : r.values) {
            CHECK(v >= *lo - 1e-12);
            CHECK(v <= *hi + 1e-12);
        }
    }
}

TEST_CASE("check_pre_treatment_equality examples", "[series]") {
    const auto a = matrix({{1, 2, 3, 4}, {5, 6, 7, 8}});
    auto r = check_pre_treatment_equality(a, a, 4, 0.0);
    CHECK(r.passed);
    CHECK(r.max_abs_diff == 0.0);
    CHECK(r.compared_episodes == 3);
    CHECK_FALSE(r.worst);

    const auto diverged = matrix({{1, 2, 30, 40}, {5, 6, 70, 80}});
    CHECK(check_pre_treatment_equality(a, diverged, 3, 0.0).passed);

    const auto bumped = matrix({{1, 2, 3, 4}, {5, 6.1, 7, 8}});
    r = check_pre_treatment_equality(a, bumped, 3, 0.0);
    CHECK_FALSE(r.passed);
    REQUIRE(r.worst);
    CHECK(r.worst->seed == SeedId{1});
    CHECK(r.worst->episode == 1);
    CHECK(r.per_seed_max[0] == 0.0);
    CHECK(r.per_seed_max[1] == Catch::Approx(0.1));
    CHECK(check_pre_treatment_equality(a, bumped, 3, 0.2).passed);
}

TEST_CASE("check_pre_treatment_equality rejects mismatched inputs", "[series]") {
    const auto a = matrix({{1, 2, 3}});
    CHECK_THROWS_AS(check_pre_treatment_equality(a, matrix({{1, 2}}), 1, 0.0), ValidationError);
    CHECK_THROWS_AS(check_pre_treatment_equality(a, PerformanceMatrix({SeedId{9}}, {{1, 2, 3}}), 1, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(check_pre_treatment_equality(a, a, 0, 0.0), ValidationError);
    CHECK_THROWS_AS(check_pre_treatment_equality(a, a, 4, 0.0), ValidationError);
    CHECK_THROWS_AS(check_pre_treatment_equality(a, a, 2, -1.0), ValidationError);
}

TEST_CASE("check_pre_treatment_equality is symmetric", "[series][property]") {
    SplitMix64 rng(stream_key({13, tag_hash("symmetry")}));
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(5), n = 2 + rng.uniform_index(20);
        const auto a = random_matrix(rng, m, n), b = random_matrix(rng, m, n);
        const std::size_t t = 1 + rng.uniform_index(n);
        const auto ab = check_pre_treatment_equality(a, b, t, 1.0);
        const auto ba = check_pre_treatment_equality(b, a, t, 1.0);
        CHECK(ab.passed == ba.passed);
        CHECK(ab.max_abs_diff == ba.max_abs_diff);
        CHECK(ab.per_seed_max == ba.per_seed_max);
    }
}

TEST_CASE("csv writes long format", "[csv]") {
    const auto m = PerformanceMatrix({SeedId{3}, SeedId{1}}, {{1.5, -2}, {0.1, 1e300}});
    CHECK(csv::to_string(m) == "seed,episode,return\n3,0,1.5\n3,1,-2\n1,0,0.1\n1,1,1e+300\n");
}

TEST_CASE("csv round-trips random matrices exactly", "[csv][property]") {
    SplitMix64 rng(stream_key({17, tag_hash("csv")}));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<SeedId> seeds;
        const std::size_t m = 1 + rng.uniform_index(5);
        while (seeds.size() < m) {
            SeedId s{rng()};
            if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) seeds.push_back(s);
        }
        std::vector<std::vector<double>> rows(m, std::vector<double>(1 + rng.uniform_index(40)));
        for (auto& r : rows) {
            for (double& v : r) v = std::ldexp(2.0 * rng.uniform01() - 1.0, static_cast<int>(rng.uniform_index(200)) - 100);
        }
        const PerformanceMatrix original(seeds, rows);
        const auto back = csv::from_string(csv::to_string(original));
        CHECK(back == original);
        CHECK(back.seeds() == original.seeds());
    }
}

TEST_CASE("csv reader accepts interleaved rows and keeps first-appearance seed order", "[csv]") {
    const auto m = csv::from_string("seed,episode,return\n5,0,1\n2,0,3\n5,1,2\n2,1,4\n");
    CHECK(m.seeds() == std::vector<SeedId>{SeedId{5}, SeedId{2}});
    CHECK(m.rows() == std::vector<std::vector<double>>{{1, 2}, {3, 4}});
}

TEST_CASE("csv reader rejects bad input", "[csv]") {
    CHECK_THROWS_AS(csv::from_string(""), ValidationError);
    CHECK_THROWS_AS(csv::from_string("a,b,c\n0,0,1\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0,1\n0,0,2\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,1,1\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0,1\n0,2,1\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0,1\n0,1,1\n1,0,1\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0,abc\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0\n"), ValidationError);
    CHECK_THROWS_AS(csv::from_string("seed,episode,return\n0,0,nan\n"), ValidationError);
}
