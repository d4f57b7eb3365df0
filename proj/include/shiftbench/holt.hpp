#pragma once

// Holt's linear method with a damped trend.
//
//   forecast   yhat(t+h|t) = l(t) + (phi + phi^2 + ... + phi^h) b(t)
//   level      l(t) = alpha y(t) + (1 - alpha)(l(t-1) + phi b(t-1))
//   trend      b(t) = beta (l(t) - l(t-1)) + (1 - beta) phi b(t-1)
//
// Series are 0-based here: y[0] is the first observation, levels[0] is l(1).
// The initial state (l0, b0) lives in the parameter set.

#include "shiftbench/error.hpp"
#include "shiftbench/nelder_mead.hpp"
#include "shiftbench/series.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace shiftbench {

struct HoltDampedParams {
    double alpha = 0.5;
    double beta = 0.1; // trend smoothing, usually written beta*
    double phi = 0.9;
    double l0 = 0.0;
    double b0 = 0.0;

    void validate() const {
        require(alpha >= 0.0 && alpha <= 1.0, "HoltDampedParams: alpha must lie in [0, 1]");
        require(beta >= 0.0 && beta <= 1.0, "HoltDampedParams: beta must lie in [0, 1]");
        require(phi > 0.0 && phi < 1.0, "HoltDampedParams: phi must lie in (0, 1)");
        require(std::isfinite(l0) && std::isfinite(b0), "HoltDampedParams: initial state must be finite");
    }
};

struct FittedTrendModel {
    HoltDampedParams params;
    std::vector<double> levels;
    std::vector<double> trends;
    std::vector<double> fitted;    // one-step-ahead yhat(t|t-1)
    std::vector<double> residuals; // y - fitted
    double sse = 0.0;
    double sigma = 0.0; // sqrt(sse / N)

    [[nodiscard]] std::size_t size() const noexcept { return levels.size(); }
    [[nodiscard]] double last_level() const { return levels.back(); }
    [[nodiscard]] double last_trend() const { return trends.back(); }
};

inline FittedTrendModel smooth(const HoltDampedParams& params, std::span<const double> y) {
    require(!y.empty(), "smooth: series must be non-empty");
    params.validate();
    const auto [alpha, beta, phi, l0, b0] = params;

    FittedTrendModel model;
    model.params = params;
    model.levels.resize(y.size());
    model.trends.resize(y.size());
    model.fitted.resize(y.size());
    model.residuals.resize(y.size());

    double level = l0;
    double trend = b0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double damped = phi * trend;
        const double prediction = level + damped;
        const double next_level = alpha * y[t] + (1.0 - alpha) * prediction;
        const double next_trend = beta * (next_level - level) + (1.0 - beta) * damped;
        model.fitted[t] = prediction;
        model.residuals[t] = y[t] - prediction;
        model.sse += model.residuals[t] * model.residuals[t];
        level = next_level;
        trend = next_trend;
        model.levels[t] = level;
        model.trends[t] = trend;
    }
    model.sigma = std::sqrt(model.sse / static_cast<double>(y.size()));
    return model;
}

inline FittedTrendModel smooth(const HoltDampedParams& params, const MeanSeries& y) {
    return smooth(params, std::span<const double>(y.values));
}

/// phi + phi^2 + ... + phi^h in closed form.
inline double damped_sum(double phi, std::size_t h) {
    return phi * (1.0 - std::pow(phi, static_cast<double>(h))) / (1.0 - phi);
}

inline std::vector<double> forecast_point(const FittedTrendModel& model, std::size_t horizon) {
    require(horizon >= 1, "forecast_point: horizon must be >= 1");
    require(model.size() >= 1, "forecast_point: model has no observations");
    const double level = model.last_level();
    const double trend = model.last_trend();
    const double phi = model.params.phi;
    std::vector<double> out(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        out[h - 1] = level + damped_sum(phi, h) * trend;
    }
    return out;
}

struct PhiBounds {
    double lower = 0.8;
    double upper = 0.98;

    void validate() const {
        require(lower > 0.0 && upper < 1.0 && lower <= upper, "PhiBounds: need 0 < lower <= upper < 1");
    }
};

namespace detail {

inline double holt_sse(std::span<const double> y, double alpha, double beta, double phi, double l0, double b0) {
    double level = l0, trend = b0, sse = 0.0;
    for (double obs : y) {
        const double damped = phi * trend;
        const double prediction = level + damped;
        const double e = obs - prediction;
        sse += e * e;
        const double next_level = alpha * obs + (1.0 - alpha) * prediction;
        trend = beta * (next_level - level) + (1.0 - beta) * damped;
        level = next_level;
    }
    return sse;
}

} // namespace detail

/// Least-squares fit of (alpha, beta, phi) with l0 = y[0], b0 = y[1] - y[0].
///
/// Coarse grid (alpha, beta in steps of 0.05; ten phi values spanning the
/// bounds), then Nelder-Mead from the best grid cell. Deterministic in y.
/// A constant series fits exactly at the first grid cell (alpha = 0).
inline FittedTrendModel fit(std::span<const double> y, PhiBounds bounds = {}) {
    require(y.size() >= 4, "fit: need at least 4 observations, got " + std::to_string(y.size()));
    bounds.validate();
    for (double v : y) {
        require(std::isfinite(v), "fit: series contains a non-finite value");
    }
    const double l0 = y[0];
    const double b0 = y[1] - y[0];

    constexpr int kSmoothingSteps = 20;
    constexpr int kPhiSteps = 10;
    std::array<double, 3> best{0.0, 0.0, bounds.lower};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kSmoothingSteps; ++i) {
        const double alpha = i / static_cast<double>(kSmoothingSteps);
        for (int j = 0; j <= kSmoothingSteps; ++j) {
            const double beta = j / static_cast<double>(kSmoothingSteps);
            for (int k = 0; k < kPhiSteps; ++k) {
                const double phi = bounds.lower + (bounds.upper - bounds.lower) * k / (kPhiSteps - 1);
                const double sse = detail::holt_sse(y, alpha, beta, phi, l0, b0);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = {alpha, beta, phi};
                }
            }
        }
    }

    if (best_sse > 0.0) {
        const auto refined = nelder_mead<3>(
            [&](const std::array<double, 3>& p) { return detail::holt_sse(y, p[0], p[1], p[2], l0, b0); }, best,
            {0.0, 0.0, bounds.lower}, {1.0, 1.0, bounds.upper});
        if (refined.value < best_sse) {
            best = refined.x;
        }
    }
    return smooth(HoltDampedParams{best[0], best[1], best[2], l0, b0}, y);
}

inline FittedTrendModel fit(const MeanSeries& y, PhiBounds bounds = {}) {
    return fit(std::span<const double>(y.values), bounds);
}

} // namespace shiftbench
