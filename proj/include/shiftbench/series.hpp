#pragma once

#include "shiftbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shiftbench {

struct SeedId {
    std::uint64_t value = 0;

    constexpr SeedId() = default;
    constexpr explicit SeedId(std::uint64_t v) : value(v) {}

    friend constexpr auto operator<=>(SeedId, SeedId) = default;
};

/// The protocol's default seed set: ten seeds, 0..9.
inline std::vector<SeedId> default_seeds(std::size_t count = 10) {
    std::vector<SeedId> seeds;
    seeds.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        seeds.emplace_back(i);
    }
    return seeds;
}

/// Per-seed x per-episode episode returns. Rows follow the seed list order.
///
/// Immutable after construction; the constructor enforces that the matrix is
/// rectangular, non-empty, finite and that seed ids are unique.
class PerformanceMatrix {
public:
    PerformanceMatrix(std::vector<SeedId> seeds, std::vector<std::vector<double>> rows, std::string label = {})
        : seeds_(std::move(seeds)), label_(std::move(label)) {
        require(!seeds_.empty(), "PerformanceMatrix: at least one seed is required");
        require(rows.size() == seeds_.size(), "PerformanceMatrix: row count does not match seed count");
        episodes_ = rows.front().size();
        require(episodes_ > 0, "PerformanceMatrix: at least one episode is required");
        std::set<SeedId> unique(seeds_.begin(), seeds_.end());
        require(unique.size() == seeds_.size(), "PerformanceMatrix: seed ids must be unique");
        values_.reserve(seeds_.size() * episodes_);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            require(rows[i].size() == episodes_,
                    "PerformanceMatrix: ragged row for seed " + std::to_string(seeds_[i].value));
            for (double v : rows[i]) {
                require(std::isfinite(v),
                        "PerformanceMatrix: non-finite return for seed " + std::to_string(seeds_[i].value));
                values_.push_back(v);
            }
        }
    }

    [[nodiscard]] std::size_t seed_count() const noexcept { return seeds_.size(); }
    [[nodiscard]] std::size_t episodes() const noexcept { return episodes_; }
    [[nodiscard]] const std::vector<SeedId>& seeds() const noexcept { return seeds_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] std::span<const double> row(std::size_t seed_index) const {
        return {values_.data() + seed_index * episodes_, episodes_};
    }

    [[nodiscard]] double at(std::size_t seed_index, std::size_t episode) const {
        return values_.at(seed_index * episodes_ + episode);
    }

    [[nodiscard]] std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out;
        out.reserve(seeds_.size());
        for (std::size_t i = 0; i < seeds_.size(); ++i) {
            auto r = row(i);
            out.emplace_back(r.begin(), r.end());
        }
        return out;
    }

    friend bool operator==(const PerformanceMatrix& a, const PerformanceMatrix& b) {
        return a.seeds_ == b.seeds_ && a.episodes_ == b.episodes_ && a.values_ == b.values_;
    }

private:
    std::vector<SeedId> seeds_;
    std::size_t episodes_ = 0;
    std::vector<double> values_;
    std::string label_;
};

struct MeanSeries {
    std::vector<double> values;
    std::string source;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Seed-averaged performance: values[t] = sum_i returns[i][t] / M.
inline MeanSeries aggregate_mean(const PerformanceMatrix& matrix) {
    const std::size_t n = matrix.episodes();
    const auto m = static_cast<double>(matrix.seed_count());
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < matrix.seed_count(); ++i) {
        auto r = matrix.row(i);
        for (std::size_t t = 0; t < n; ++t) {
            sums[t] += r[t];
        }
    }
    for (double& s : sums) {
        s /= m;
    }
    return {std::move(sums), matrix.label()};
}

/// Trailing mean over `window` points. The first window-1 outputs average all
/// points seen so far, so the output has the same length as the input.
inline MeanSeries rolling_mean(const MeanSeries& series, std::size_t window) {
    require(window >= 1, "rolling_mean: window must be >= 1");
    const auto& y = series.values;
    std::vector<double> out(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t k = first; k <= t; ++k) {
            sum += y[k];
        }
        out[t] = sum / static_cast<double>(t - first + 1);
    }
    return {std::move(out), series.source};
}

struct EqualityReport {
    struct Location {
        SeedId seed;
        std::size_t episode = 0; // 0-based
    };

    bool passed = true;
    double tolerance = 0.0;
    std::size_t compared_episodes = 0;
    double max_abs_diff = 0.0;
    std::vector<double> per_seed_max; // aligned with the seed list
    std::optional<Location> worst;    // set whenever max_abs_diff > 0
};

/// Compares the pre-intervention episodes (1-based t < T, i.e. 0-based
/// indices [0, T-1)) of two matrices seed by seed.
inline EqualityReport check_pre_treatment_equality(const PerformanceMatrix& treatment,
                                                   const PerformanceMatrix& control,
                                                   std::size_t intervention, double tol) {
    require(treatment.seeds() == control.seeds(),
            "check_pre_treatment_equality: treatment and control seed lists differ");
    require(treatment.episodes() == control.episodes(),
            "check_pre_treatment_equality: treatment and control episode counts differ");
    require(intervention >= 1 && intervention <= treatment.episodes(),
            "check_pre_treatment_equality: intervention episode must lie in [1, N]");
    require(tol >= 0.0, "check_pre_treatment_equality: tolerance must be non-negative");

    EqualityReport report;
    report.tolerance = tol;
    report.compared_episodes = intervention - 1;
    report.per_seed_max.assign(treatment.seed_count(), 0.0);
    for (std::size_t i = 0; i < treatment.seed_count(); ++i) {
        auto a = treatment.row(i);
        auto b = control.row(i);
        for (std::size_t t = 0; t + 1 < intervention; ++t) {
            const double d = std::abs(a[t] - b[t]);
            report.per_seed_max[i] = std::max(report.per_seed_max[i], d);
            if (d > report.max_abs_diff) {
                report.max_abs_diff = d;
                report.worst = EqualityReport::Location{treatment.seeds()[i], t};
            }
        }
    }
    report.passed = report.max_abs_diff <= tol;
    return report;
}

} // namespace shiftbench
