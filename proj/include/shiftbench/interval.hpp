#pragma once

#include "shiftbench/error.hpp"
#include "shiftbench/holt.hpp"
#include "shiftbench/rng.hpp"
#include "shiftbench/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace shiftbench {

struct ForecastBand {
    std::size_t horizon = 0;
    double level = 0.99;
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] double width(std::size_t h) const { return upper[h] - lower[h]; }
};

struct IntervalOptions {
    double level = 0.99;
    std::size_t paths = 5000;
    SeedId noise_seed{0};
};

/// Linear-interpolation sample quantile of an ascending-sorted sample.
inline double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Residual-bootstrap prediction band.
///
/// Each path runs the smoothing recursion forward from the final state with
/// innovations resampled from the model residuals. The recursion is linear, so
/// paths are simulated as deviations from the point forecast; bounds are
/// point + quantile(deviation). Path p draws from stream (noise_seed, p).
/// Offsets are clamped at zero on each side and then carried forward by a
/// running max, so lower <= point <= upper and width never shrinks with h.
inline ForecastBand prediction_interval(const FittedTrendModel& model, std::size_t horizon,
                                        const IntervalOptions& options = {}) {
    require(horizon >= 1, "prediction_interval: horizon must be >= 1");
    require(options.level > 0.0 && options.level < 1.0, "prediction_interval: level must lie in (0, 1)");
    require(options.paths >= 1, "prediction_interval: need at least one path");
    require(model.residuals.size() >= 2, "prediction_interval: need at least 2 residuals to resample");

    const double alpha = model.params.alpha;
    const double beta = model.params.beta;
    const double phi = model.params.phi;
    const auto& residuals = model.residuals;

    // deviations[h][path]
    std::vector<std::vector<double>> deviations(horizon, std::vector<double>(options.paths));
    for (std::size_t path = 0; path < options.paths; ++path) {
        SplitMix64 rng(stream_key({options.noise_seed.value, path, tag_hash("bootstrap")}));
        double level_dev = 0.0;
        double trend_dev = 0.0;
        for (std::size_t h = 0; h < horizon; ++h) {
            const double e = residuals[rng.uniform_index(residuals.size())];
            const double predicted_dev = level_dev + phi * trend_dev;
            deviations[h][path] = predicted_dev + e;
            level_dev = predicted_dev + alpha * e;
            trend_dev = phi * trend_dev + alpha * beta * e;
        }
    }

    ForecastBand band;
    band.horizon = horizon;
    band.level = options.level;
    band.point = forecast_point(model, horizon);
    band.lower.resize(horizon);
    band.upper.resize(horizon);

    const double q_lo = (1.0 - options.level) / 2.0;
    const double q_hi = 1.0 - q_lo;
    double down = 0.0;
    double up = 0.0;
    for (std::size_t h = 0; h < horizon; ++h) {
        auto& sample = deviations[h];
        std::sort(sample.begin(), sample.end());
        down = std::max(down, std::max(0.0, -sorted_quantile(sample, q_lo)));
        up = std::max(up, std::max(0.0, sorted_quantile(sample, q_hi)));
        band.lower[h] = band.point[h] - down;
        band.upper[h] = band.point[h] + up;
    }
    return band;
}

enum class TrendVerdict { SignificantlyHigher, SignificantlyLower, NoSignificantDifference };

inline std::string_view to_string(TrendVerdict v) {
    switch (v) {
    case TrendVerdict::SignificantlyHigher: return "SignificantlyHigher";
    case TrendVerdict::SignificantlyLower: return "SignificantlyLower";
    case TrendVerdict::NoSignificantDifference: return "NoSignificantDifference";
    }
    return "NoSignificantDifference";
}

struct TrendComparison {
    TrendVerdict verdict = TrendVerdict::NoSignificantDifference;
    std::vector<bool> overlap_mask; // true where the two intervals overlap
    bool final_step_disjoint = false;

    [[nodiscard]] bool disjoint_everywhere() const {
        return std::none_of(overlap_mask.begin(), overlap_mask.end(), [](bool b) { return b; });
    }
};

/// Verdict from a's point of view. Keys on the last horizon step: a is
/// significantly higher when its final point forecast is higher and the two
/// intervals do not overlap there. The full mask is kept for stricter reads.
inline TrendComparison compare_trends(const ForecastBand& a, const ForecastBand& b) {
    require(a.horizon == b.horizon, "compare_trends: horizons differ");
    require(a.level == b.level, "compare_trends: interval levels differ");
    require(a.horizon >= 1, "compare_trends: empty bands");

    TrendComparison out;
    out.overlap_mask.resize(a.horizon);
    for (std::size_t h = 0; h < a.horizon; ++h) {
        out.overlap_mask[h] = !(a.lower[h] > b.upper[h] || b.lower[h] > a.upper[h]);
    }
    const std::size_t last = a.horizon - 1;
    out.final_step_disjoint = !out.overlap_mask[last];
    if (out.final_step_disjoint) {
        if (a.point[last] > b.point[last]) {
            out.verdict = TrendVerdict::SignificantlyHigher;
        } else if (a.point[last] < b.point[last]) {
            out.verdict = TrendVerdict::SignificantlyLower;
        }
    }
    return out;
}

} // namespace shiftbench
