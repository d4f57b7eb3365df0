#pragma once

#include "shiftbench/error.hpp"
#include "shiftbench/series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace shiftbench::harness {

enum class EnvKind { ChainWorld, TeamGrid };

/// Single agent walking a chain towards the right end. The observation is a
/// vector of cue features in [-1, 1]; the correct action is always "right".
struct ChainWorldParams {
    std::size_t states = 12;
    std::size_t obs_dim = 8;
    double cue_margin = 0.2; // magnitude of each clean cue feature
    double goal_reward = 1.0;
    double step_cost = 0.1; // charged on every step spent off the goal
};

/// K agents on a G x G grid covering K landmark cells. Team reward per step:
/// cover_weight * covered - move_weight * moves, minus shared_penalty * K
/// whenever the imbalance (uncovered landmarks plus agents standing on no
/// landmark) exceeds imbalance_budget. The penalty is shared by the team.
struct TeamGridParams {
    std::size_t team_size = 5;
    std::size_t grid_size = 6;
    double cover_weight = 1.0;
    double move_weight = 0.1;
    double shared_penalty = 0.5;
    std::size_t imbalance_budget = 1;
};

struct EnvironmentSpec {
    std::string name = "env";
    EnvKind kind = EnvKind::ChainWorld;
    std::size_t episode_length = 30;
    ChainWorldParams chain;
    TeamGridParams team;

    [[nodiscard]] std::size_t team_size() const noexcept {
        return kind == EnvKind::ChainWorld ? 1 : team.team_size;
    }

    void validate() const {
        require(episode_length >= 1, "EnvironmentSpec: episode_length must be >= 1");
        if (kind == EnvKind::ChainWorld) {
            require(chain.states >= 2, "ChainWorld: need at least 2 states");
            require(chain.obs_dim >= 1, "ChainWorld: obs_dim must be >= 1");
            require(chain.cue_margin > 0.0 && chain.cue_margin <= 1.0, "ChainWorld: cue_margin must lie in (0, 1]");
        } else {
            require(team.team_size >= 1, "TeamGrid: team_size must be >= 1");
            require(team.grid_size >= 2, "TeamGrid: grid_size must be >= 2");
            require(team.team_size <= team.grid_size * team.grid_size, "TeamGrid: more landmarks than cells");
        }
    }
};

enum class AgentKind { Competent, Mediocre, Untrained, OutsidePretrained };

struct AgentSpec {
    std::string name;
    AgentKind kind = AgentKind::Competent;
    /// Added to the run seed to derive the agent's own fixed parameters.
    std::int64_t seed_offset = 0;
};

struct AgentSwitch {
    std::size_t n_replaced = 1;
    AgentKind replacement = AgentKind::OutsidePretrained;
    std::size_t min_duration = 5; // episodes, inclusive
    std::size_t max_duration = 20;
    double start_probability = 0.1; // per free episode, observational mode only
};

enum class ShiftMode { None, ControlledAt, RandomPerEpisode, AgentSwitch };

/// A distribution-shift intervention.
///
/// ControlledAt: from episode T (1-based) on, observations are perturbed by
/// epsilon and, if `swap` is set, slots 0..n_replaced-1 are replaced for good.
/// RandomPerEpisode: an episode is attacked at magnitude epsilon when a
/// uniform draw exceeds `threshold`. AgentSwitch: replacement agents switch in
/// at random times for uniformly drawn durations (uses `swap`).
struct ShiftSpec {
    std::string name = "shift";
    ShiftMode mode = ShiftMode::None;
    std::optional<std::size_t> at_episode; // defaults to N/2
    double threshold = 0.5;
    double epsilon = 0.0;
    std::optional<AgentSwitch> swap;

    [[nodiscard]] bool controlled() const noexcept { return mode == ShiftMode::ControlledAt; }
    [[nodiscard]] bool observational() const noexcept {
        return mode == ShiftMode::RandomPerEpisode || mode == ShiftMode::AgentSwitch;
    }

    [[nodiscard]] std::size_t intervention_episode(std::size_t n_episodes) const {
        return at_episode.value_or(n_episodes / 2);
    }

    void validate(std::size_t team_size, std::size_t n_episodes) const {
        require(epsilon >= 0.0, "ShiftSpec: epsilon must be >= 0");
        require(threshold >= 0.0 && threshold <= 1.0, "ShiftSpec: threshold must lie in [0, 1]");
        if (mode == ShiftMode::ControlledAt) {
            const auto t = intervention_episode(n_episodes);
            require(t >= 1 && t <= n_episodes, "ShiftSpec: intervention episode must lie in [1, N]");
        }
        if (mode == ShiftMode::AgentSwitch) {
            require(swap.has_value(), "ShiftSpec: AgentSwitch mode requires switch parameters");
        }
        if (swap) {
            require(swap->n_replaced >= 1 && swap->n_replaced <= team_size,
                    "ShiftSpec: n_replaced must lie in [1, K] (K=" + std::to_string(team_size) + ")");
            require(swap->min_duration >= 1 && swap->min_duration <= swap->max_duration,
                    "ShiftSpec: switch duration range must satisfy 1 <= a <= b");
            require(swap->start_probability >= 0.0 && swap->start_probability <= 1.0,
                    "ShiftSpec: start_probability must lie in [0, 1]");
        }
    }
};

struct RunConfig {
    EnvironmentSpec env;
    std::vector<AgentSpec> agents{AgentSpec{}};
    std::vector<SeedId> seeds = default_seeds();
    std::size_t n_episodes = 100;
    ShiftSpec shift;

    void validate() const {
        env.validate();
        require(!seeds.empty(), "RunConfig: seed list is empty");
        require(std::set<SeedId>(seeds.begin(), seeds.end()).size() == seeds.size(), "RunConfig: seeds must be unique");
        require(n_episodes >= 1, "RunConfig: n_episodes must be >= 1");
        require(agents.size() == 1 || agents.size() == env.team_size(),
                "RunConfig: give one agent (shared by every slot) or exactly K agents");
        shift.validate(env.team_size(), n_episodes);
    }

    /// Agent occupying `slot` when no replacement is active.
    [[nodiscard]] const AgentSpec& agent_for(std::size_t slot) const {
        return agents.size() == 1 ? agents.front() : agents.at(slot);
    }
};

inline std::string_view to_string(EnvKind k) {
    return k == EnvKind::ChainWorld ? "ChainWorld" : "TeamGrid";
}

inline std::string_view to_string(AgentKind k) {
    switch (k) {
    case AgentKind::Competent: return "Competent";
    case AgentKind::Mediocre: return "Mediocre";
    case AgentKind::Untrained: return "Untrained";
    case AgentKind::OutsidePretrained: return "OutsidePretrained";
    }
    return "Competent";
}

inline std::string_view to_string(ShiftMode m) {
    switch (m) {
    case ShiftMode::None: return "none";
    case ShiftMode::ControlledAt: return "controlled";
    case ShiftMode::RandomPerEpisode: return "random";
    case ShiftMode::AgentSwitch: return "switch";
    }
    return "none";
}

} // namespace shiftbench::harness
