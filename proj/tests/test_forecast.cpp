#include "shiftbench/holt.hpp"
#include "shiftbench/interval.hpp"
#include "shiftbench/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace shiftbench;

namespace {

ForecastBand flat_band(double centre, double half_width, std::size_t horizon, double level = 0.99) {
    ForecastBand b;
    b.horizon = horizon;
    b.level = level;
    b.point.assign(horizon, centre);
    b.lower.assign(horizon, centre - half_width);
    b.upper.assign(horizon, centre + half_width);
    return b;
}

std::vector<double> gaussian_noise(SplitMix64& rng, std::size_t n, double sigma) {
    std::vector<double> out(n);
    for (double& v : out) {
        const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
        v = sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    return out;
}

} // namespace

TEST_CASE("smooth hand-checked example", "[holt]") {
    const std::vector<double> y{10, 12};
    const auto m = smooth(HoltDampedParams{0.5, 0.5, 0.9, 10, 2}, y);
    CHECK(m.levels[0] == Catch::Approx(10.9).epsilon(1e-14));
    CHECK(m.trends[0] == Catch::Approx(1.35).epsilon(1e-14));
    CHECK(m.levels[1] == Catch::Approx(12.0575).epsilon(1e-14));
    CHECK(m.trends[1] == Catch::Approx(1.18625).epsilon(1e-14));
    CHECK(m.fitted[0] == Catch::Approx(11.8));
    CHECK(m.residuals[0] == Catch::Approx(-1.8));

    const auto f = forecast_point(m, 2);
    CHECK(f[0] == Catch::Approx(13.125125).epsilon(1e-14));
    CHECK(f[1] == Catch::Approx(14.0859875).epsilon(1e-14));
}

TEST_CASE("smooth degenerate parameter choices", "[holt]") {
    SplitMix64 rng(stream_key({1, tag_hash("holt-degenerate")}));
    std::vector<double> y(50);
    for (double& v : y) v = 20.0 * rng.uniform01();

    const auto full = smooth(HoltDampedParams{1.0, 0.3, 0.85, 4.0, -1.0}, y);
    for (std::size_t t = 0; t < y.size(); ++t) CHECK(full.levels[t] == Catch::Approx(y[t]).margin(1e-12));

    const auto no_trend = smooth(HoltDampedParams{0.3, 0.0, 0.9, y[0], 0.0}, y);
    double level = y[0];
    for (std::size_t t = 0; t < y.size(); ++t) {
        CHECK(no_trend.trends[t] == 0.0);
        level = 0.3 * y[t] + 0.7 * level;
        CHECK(no_trend.levels[t] == Catch::Approx(level).margin(1e-12));
    }
}

TEST_CASE("smooth and forecast validate input", "[holt]") {
    const std::vector<double> empty;
    CHECK_THROWS_AS(smooth(HoltDampedParams{}, empty), ValidationError);
    const std::vector<double> y{1, 2};
    CHECK_THROWS_AS(smooth(HoltDampedParams{1.5, 0.1, 0.9, 0, 0}, y), ValidationError);
    CHECK_THROWS_AS(smooth(HoltDampedParams{0.5, -0.1, 0.9, 0, 0}, y), ValidationError);
    CHECK_THROWS_AS(smooth(HoltDampedParams{0.5, 0.1, 1.0, 0, 0}, y), ValidationError);
    CHECK_THROWS_AS(forecast_point(smooth(HoltDampedParams{}, y), 0), ValidationError);
}

TEST_CASE("forecast_point limits", "[holt]") {
    FittedTrendModel m;
    m.params.phi = 0.9;
    m.levels = {7.5};
    m.trends = {0.0};
    for (double v : forecast_point(m, 30)) CHECK(v == 7.5);

    m.levels = {0.0};
    m.trends = {1.0};
    const auto far = forecast_point(m, 2000);
    CHECK(far.back() == Catch::Approx(9.0).margin(1e-9));
    for (std::size_t h = 1; h < far.size(); ++h) CHECK(far[h] >= far[h - 1]);
}

TEST_CASE("fit constant series", "[fit]") {
    const std::vector<double> y(40, 3.5);
    const auto m = fit(y);
    CHECK(m.sse == 0.0);
    for (double v : m.fitted) CHECK(v == 3.5);
    CHECK_THROWS_AS(fit(std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("fit does no worse than the generating parameters", "[fit]") {
    const HoltDampedParams truth{0.4, 0.2, 0.9, 0.0, 0.0};
    SplitMix64 rng(stream_key({2, tag_hash("fit-recovery")}));
    const auto noise = gaussian_noise(rng, 200, 1.0);
    std::vector<double> y(200);
    double level = 5.0, trend = 0.3;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double pred = level + truth.phi * trend;
        y[t] = pred + noise[t];
        const double next = truth.alpha * y[t] + (1 - truth.alpha) * pred;
        trend = truth.beta * (next - level) + (1 - truth.beta) * truth.phi * trend;
        level = next;
    }
    const auto fitted = fit(y);
    auto true_params = truth;
    true_params.l0 = y[0];
    true_params.b0 = y[1] - y[0];
    CHECK(fitted.sse <= smooth(true_params, y).sse);
    CHECK(fitted.params.phi >= 0.8);
    CHECK(fitted.params.phi <= 0.98);
}

TEST_CASE("fit on a ramp then plateau forecasts a plateau", "[fit]") {
    std::vector<double> y(100);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = t < 50 ? static_cast<double>(t) : 50.0;
    const auto m = fit(y);
    CHECK(m.params.phi < 1.0);
    const auto f = forecast_point(m, 5000);
    const double limit = m.last_level() + m.last_trend() * m.params.phi / (1.0 - m.params.phi);
    CHECK(f.back() == Catch::Approx(limit).margin(1e-6));
    CHECK(std::abs(f.back() - 50.0) < 5.0);
    CHECK(std::abs(f.back() - f[f.size() - 1000]) < 1e-9);
}

TEST_CASE("fit is deterministic", "[fit]") {
    SplitMix64 rng(stream_key({3, tag_hash("fit-det")}));
    const auto y = gaussian_noise(rng, 120, 2.0);
    const auto a = fit(y), b = fit(y);
    CHECK(a.params.alpha == b.params.alpha);
    CHECK(a.params.beta == b.params.beta);
    CHECK(a.params.phi == b.params.phi);
    CHECK(a.fitted == b.fitted);
}

TEST_CASE("prediction_interval zero residuals give a degenerate band", "[interval]") {
    const auto m = fit(std::vector<double>(30, -2.0));
    const auto band = prediction_interval(m, 20, {0.99, 500, SeedId{0}});
    for (std::size_t h = 0; h < 20; ++h) {
        CHECK(band.lower[h] == band.point[h]);
        CHECK(band.upper[h] == band.point[h]);
    }
}

TEST_CASE("prediction_interval nesting, monotone width and reproducibility", "[interval]") {
    SplitMix64 rng(stream_key({4, tag_hash("interval")}));
    for (int trial = 0; trial < 10; ++trial) {
        auto y = gaussian_noise(rng, 150, 1.5);
        for (std::size_t t = 0; t < y.size(); ++t) y[t] += 0.05 * static_cast<double>(t);
        const auto m = fit(y);
        const IntervalOptions wide{0.99, 2000, SeedId{static_cast<std::uint64_t>(trial)}};
        IntervalOptions narrow = wide;
        narrow.level = 0.80;
        const auto b99 = prediction_interval(m, 40, wide);
        const auto b80 = prediction_interval(m, 40, narrow);
        CHECK(prediction_interval(m, 40, wide).lower == b99.lower);
        CHECK(prediction_interval(m, 40, wide).upper == b99.upper);
        for (std::size_t h = 0; h < 40; ++h) {
            CHECK(b99.lower[h] <= b80.lower[h]);
            CHECK(b99.upper[h] >= b80.upper[h]);
            CHECK(b99.lower[h] <= b99.point[h]);
            CHECK(b99.upper[h] >= b99.point[h]);
            if (h > 0) CHECK(b99.width(h) >= b99.width(h - 1) - 1e-12);
        }
    }
}

TEST_CASE("prediction_interval width is invariant under a level shift", "[interval][property]") {
    SplitMix64 rng(stream_key({5, tag_hash("equivariance")}));
    const auto y = gaussian_noise(rng, 100, 1.0);
    const auto m = fit(y);
    auto shifted = m;
    for (double& l : shifted.levels) l += 100.0;
    const auto a = prediction_interval(m, 25, {0.99, 1000, SeedId{9}});
    const auto b = prediction_interval(shifted, 25, {0.99, 1000, SeedId{9}});
    for (std::size_t h = 0; h < 25; ++h) {
        CHECK(b.point[h] == Catch::Approx(a.point[h] + 100.0));
        CHECK(b.width(h) == Catch::Approx(a.width(h)).margin(1e-9));
    }
}

TEST_CASE("prediction_interval validates input", "[interval]") {
    const auto m = fit(std::vector<double>{1, 2, 4, 3, 5});
    CHECK_THROWS_AS(prediction_interval(m, 0), ValidationError);
    CHECK_THROWS_AS(prediction_interval(m, 5, {1.0, 100, SeedId{0}}), ValidationError);
    CHECK_THROWS_AS(prediction_interval(m, 5, {0.9, 0, SeedId{0}}), ValidationError);
    auto tiny = m;
    tiny.residuals.resize(1);
    CHECK_THROWS_AS(prediction_interval(tiny, 5), ValidationError);
}

TEST_CASE("compare_trends examples", "[interval]") {
    const auto a = flat_band(10, 1, 8), b = flat_band(5, 1, 8);
    auto c = compare_trends(a, b);
    CHECK(c.verdict == TrendVerdict::SignificantlyHigher);
    CHECK(c.disjoint_everywhere());
    CHECK(compare_trends(b, a).verdict == TrendVerdict::SignificantlyLower);

    c = compare_trends(a, a);
    CHECK(c.verdict == TrendVerdict::NoSignificantDifference);
    for (bool overlap : c.overlap_mask) CHECK(overlap);

    auto falling = flat_band(10, 1, 8);
    for (std::size_t h = 0; h < 8; ++h) {
        falling.point[h] = 10.0 - static_cast<double>(h);
        falling.lower[h] = falling.point[h] - 1.0;
        falling.upper[h] = falling.point[h] + 1.0;
    }
    c = compare_trends(a, falling);
    CHECK(c.verdict == TrendVerdict::SignificantlyHigher);
    CHECK(c.final_step_disjoint);
    CHECK(c.overlap_mask.front());
    CHECK_FALSE(c.overlap_mask.back());
    CHECK_FALSE(c.disjoint_everywhere());

    CHECK_THROWS_AS(compare_trends(a, flat_band(10, 1, 7)), ValidationError);
    CHECK_THROWS_AS(compare_trends(a, flat_band(10, 1, 8, 0.8)), ValidationError);
}

TEST_CASE("sorted_quantile interpolates linearly", "[interval]") {
    const std::vector<double> s{0, 10, 20, 30};
    CHECK(sorted_quantile(s, 0.0) == 0.0);
    CHECK(sorted_quantile(s, 1.0) == 30.0);
    CHECK(sorted_quantile(s, 0.5) == Catch::Approx(15.0));
    CHECK(sorted_quantile(s, 0.25) == Catch::Approx(7.5));
}
