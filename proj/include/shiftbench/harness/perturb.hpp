#pragma once

// Gradient-free stand-in for FGSM. The scripted agents have no differentiable
// loss, so the "gradient sign" is a seeded sign vector; the magnitude epsilon
// is the experimental variable, as with FGSM.

#include "shiftbench/error.hpp"
#include "shiftbench/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shiftbench::harness {

struct ObservationRange {
    double lower = -1.0;
    double upper = 1.0;
};

/// obs + epsilon * sign(noise), clamped to the valid range.
inline std::vector<double> perturb_observation(std::span<const double> obs, double epsilon,
                                               std::span<const double> noise, ObservationRange range = {}) {
    require(epsilon >= 0.0, "perturb_observation: epsilon must be >= 0");
    require(noise.size() == obs.size(), "perturb_observation: noise and observation sizes differ");
    std::vector<double> out(obs.begin(), obs.end());
    if (epsilon == 0.0) {
        return out;
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double sign = noise[j] > 0.0 ? 1.0 : (noise[j] < 0.0 ? -1.0 : 0.0);
        out[j] = std::clamp(out[j] + epsilon * sign, range.lower, range.upper);
    }
    return out;
}

/// +/-1 vector drawn from the stream `key`. Independent of epsilon, so the
/// same step sees the same direction at every perturbation magnitude.
inline std::vector<double> sign_noise(std::uint64_t key, std::size_t dim) {
    SplitMix64 rng(key);
    std::vector<double> signs(dim);
    for (double& s : signs) {
        s = rng.coin() ? 1.0 : -1.0;
    }
    return signs;
}

} // namespace shiftbench::harness
