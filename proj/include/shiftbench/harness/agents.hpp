#pragma once

// Scripted stand-ins for trained policies. Every policy is a pure function of
// its observation plus parameters fixed at construction.

#include "shiftbench/harness/perturb.hpp"
#include "shiftbench/harness/spec.hpp"
#include "shiftbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace shiftbench::harness {

inline std::uint64_t agent_seed(SeedId run_seed, const AgentSpec& spec) {
    return run_seed.value + static_cast<std::uint64_t>(spec.seed_offset);
}

/// The cue code ChainWorld uses for a run seed: one +/-1 per feature.
inline std::vector<double> chain_cue_code(SeedId seed, std::size_t obs_dim) {
    return sign_noise(stream_key({seed.value, tag_hash("chain-code")}), obs_dim);
}

enum class ChainAction { Left, Right };

/// Linear classifier over the cue features: Right iff weights . obs > 0.
///
/// Competent agents hold the exact cue code. Outside-pretrained and mediocre
/// agents disagree with it on D/8 and D/4 features respectively, which lowers
/// their decision margin. Untrained agents hold random weights.
class ChainPolicy {
public:
    ChainPolicy(const AgentSpec& spec, SeedId run_seed, std::size_t slot, const ChainWorldParams& params) {
        const auto code = chain_cue_code(run_seed, params.obs_dim);
        const std::uint64_t own = agent_seed(run_seed, spec);
        switch (spec.kind) {
        case AgentKind::Competent:
            weights_ = code;
            break;
        case AgentKind::Mediocre:
            weights_ = flipped(code, params.obs_dim / 4, stream_key({own, slot, tag_hash("mediocre")}));
            break;
        case AgentKind::OutsidePretrained:
            weights_ = flipped(code, params.obs_dim / 8, stream_key({own, slot, tag_hash("outside")}));
            break;
        case AgentKind::Untrained:
            weights_ = sign_noise(stream_key({own, slot, tag_hash("untrained")}), params.obs_dim);
            break;
        }
    }

    [[nodiscard]] ChainAction act(std::span<const double> obs) const {
        const double score = std::inner_product(obs.begin(), obs.end(), weights_.begin(), 0.0);
        return score > 0.0 ? ChainAction::Right : ChainAction::Left;
    }

    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

private:
    static std::vector<double> flipped(std::vector<double> w, std::size_t count, std::uint64_t key) {
        std::vector<std::size_t> order(w.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        SplitMix64 rng(key);
        for (std::size_t k = 0; k < count && k < w.size(); ++k) {
            std::swap(order[k], order[k + rng.uniform_index(w.size() - k)]);
            w[order[k]] = -w[order[k]];
        }
        return w;
    }

    std::vector<double> weights_;
};

enum class GridAction { Stay, Right, Left, Up, Down };

struct GridObservation {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t slot = 0;
    std::size_t step = 0;
    std::vector<double> landmarks; // x0, y0, x1, y1, ... in the environment's canonical order
};

/// TeamGrid policies. Landmarks arrive sorted row-major; the home team sends
/// slot k to the k-th landmark in that order. The outside team was trained
/// with a column-major convention and sends slot k to the k-th landmark when
/// sorted by (x, y), so mixed teams can double up and leave landmarks bare.
class GridPolicy {
public:
    GridPolicy(const AgentSpec& spec, SeedId run_seed, std::size_t slot, const TeamGridParams& params)
        : kind_(spec.kind), seed_(agent_seed(run_seed, spec)), slot_(slot), params_(params) {}

    [[nodiscard]] GridAction act(const GridObservation& obs) const {
        switch (kind_) {
        case AgentKind::Competent:
            return toward(obs, slot_);
        case AgentKind::Mediocre:
            return (obs.step + slot_) % 2 == 0 ? toward(obs, slot_) : GridAction::Stay;
        case AgentKind::OutsidePretrained:
            return toward(obs, column_major_rank(obs, slot_));
        case AgentKind::Untrained:
            return static_cast<GridAction>(stream_key({seed_, slot_, obs.x, obs.y, obs.step}) % 5);
        }
        return GridAction::Stay;
    }

private:
    [[nodiscard]] std::pair<std::size_t, std::size_t> decode(const GridObservation& obs, std::size_t landmark) const {
        const double hi = static_cast<double>(params_.grid_size - 1);
        return {static_cast<std::size_t>(std::clamp(std::round(obs.landmarks[2 * landmark]), 0.0, hi)),
                static_cast<std::size_t>(std::clamp(std::round(obs.landmarks[2 * landmark + 1]), 0.0, hi))};
    }

    // Index (in observation order) of the rank-th landmark sorted by (x, y).
    [[nodiscard]] std::size_t column_major_rank(const GridObservation& obs, std::size_t rank) const {
        std::vector<std::size_t> order(params_.team_size);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return decode(obs, a) < decode(obs, b); });
        return order[rank];
    }

    [[nodiscard]] GridAction toward(const GridObservation& obs, std::size_t landmark) const {
        const auto [tx, ty] = decode(obs, landmark);
        if (obs.x < tx) return GridAction::Right;
        if (obs.x > tx) return GridAction::Left;
        if (obs.y < ty) return GridAction::Up;
        if (obs.y > ty) return GridAction::Down;
        return GridAction::Stay;
    }

    AgentKind kind_;
    std::uint64_t seed_;
    std::size_t slot_;
    TeamGridParams params_;
};

} // namespace shiftbench::harness
