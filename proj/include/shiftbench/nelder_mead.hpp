#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>

namespace shiftbench {

template <std::size_t Dim>
struct NelderMeadResult {
    std::array<double, Dim> x{};
    double value = 0.0;
    std::size_t evaluations = 0;
};

struct NelderMeadOptions {
    std::size_t max_evaluations = 2000;
    double value_tolerance = 1e-12; // spread of vertex values
    double initial_step = 0.05;
};

/// Box-constrained Nelder-Mead. Candidate points are projected onto
/// [lower, upper] before evaluation, so every evaluated point is feasible.
/// The start point is a simplex vertex, so the result is never worse than it.
template <std::size_t Dim, typename Objective>
NelderMeadResult<Dim> nelder_mead(Objective&& objective, std::array<double, Dim> start,
                                  const std::array<double, Dim>& lower, const std::array<double, Dim>& upper,
                                  const NelderMeadOptions& options = {}) {
    using Point = std::array<double, Dim>;
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    auto project = [&](Point p) {
        for (std::size_t d = 0; d < Dim; ++d) {
            p[d] = std::clamp(p[d], lower[d], upper[d]);
        }
        return p;
    };

    std::size_t evaluations = 0;
    auto eval = [&](const Point& p) {
        ++evaluations;
        return objective(p);
    };

    std::array<Point, Dim + 1> simplex{};
    std::array<double, Dim + 1> values{};
    simplex[0] = project(start);
    values[0] = eval(simplex[0]);
    for (std::size_t d = 0; d < Dim; ++d) {
        Point p = simplex[0];
        const double span = upper[d] - lower[d];
        const double step = options.initial_step * (span > 0 ? span : 1.0);
        // Step inward if the start sits on the upper face.
        p[d] = p[d] + step <= upper[d] ? p[d] + step : p[d] - step;
        simplex[d + 1] = project(p);
        values[d + 1] = eval(simplex[d + 1]);
    }

    std::array<std::size_t, Dim + 1> idx{};
    while (evaluations < options.max_evaluations) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        // Stable on ties so the run is fully deterministic.
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = idx.front(), worst = idx.back(), second_worst = idx[Dim - 1];
        if (std::abs(values[worst] - values[best]) <= options.value_tolerance * (1.0 + std::abs(values[best]))) {
            break;
        }

        Point centroid{};
        for (std::size_t k = 0; k < Dim; ++k) {
            for (std::size_t d = 0; d < Dim; ++d) {
                centroid[d] += simplex[idx[k]][d] / static_cast<double>(Dim);
            }
        }
        auto along = [&](double coef) {
            Point p{};
            for (std::size_t d = 0; d < Dim; ++d) {
                p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
            }
            return project(p);
        };

        const Point reflected = along(-kReflect);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            const Point expanded = along(-kExpand);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        const Point contracted = along(outside ? -kContract : kContract);
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t k = 1; k <= Dim; ++k) {
            auto& p = simplex[idx[k]];
            for (std::size_t d = 0; d < Dim; ++d) {
                p[d] = simplex[best][d] + kShrink * (p[d] - simplex[best][d]);
            }
            p = project(p);
            values[idx[k]] = eval(p);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    return {simplex[best], values[best], evaluations};
}

} // namespace shiftbench
