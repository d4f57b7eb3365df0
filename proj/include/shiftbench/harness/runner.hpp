#pragma once

#include "shiftbench/causal.hpp"
#include "shiftbench/error.hpp"
#include "shiftbench/harness/environments.hpp"
#include "shiftbench/harness/spec.hpp"
#include "shiftbench/harness/switching.hpp"
#include "shiftbench/rng.hpp"
#include "shiftbench/series.hpp"

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace shiftbench::harness {

/// Whether the random attacker hits `episode`: a uniform draw keyed by
/// (seed, episode) must exceed the threshold.
inline bool attacked(SeedId seed, std::size_t episode, double threshold) {
    SplitMix64 rng(stream_key({seed.value, episode, tag_hash("attack")}));
    return rng.uniform01() > threshold;
}

inline std::optional<SwitchSchedule> switch_schedule_for(const RunConfig& config, SeedId seed) {
    const auto& shift = config.shift;
    if (!shift.swap) {
        return std::nullopt;
    }
    if (shift.mode == ShiftMode::ControlledAt) {
        return schedule_switches(config.env.team_size(), *shift.swap, seed, config.n_episodes,
                                 shift.intervention_episode(config.n_episodes));
    }
    if (shift.mode == ShiftMode::AgentSwitch) {
        return schedule_switches(config.env.team_size(), *shift.swap, seed, config.n_episodes);
    }
    return std::nullopt;
}

/// Resolves the shift into one plan per episode for a single seed.
inline std::vector<EpisodePlan> plan_episodes(const RunConfig& config, SeedId seed) {
    const auto& shift = config.shift;
    const std::size_t k_agents = config.env.team_size();
    const auto schedule = switch_schedule_for(config, seed);

    std::vector<EpisodePlan> plans(config.n_episodes);
    for (std::size_t e = 0; e < config.n_episodes; ++e) {
        auto& plan = plans[e];
        switch (shift.mode) {
        case ShiftMode::ControlledAt:
            plan.epsilon = e + 1 >= shift.intervention_episode(config.n_episodes) ? shift.epsilon : 0.0;
            break;
        case ShiftMode::RandomPerEpisode:
            plan.epsilon = attacked(seed, e, shift.threshold) ? shift.epsilon : 0.0;
            break;
        case ShiftMode::None:
        case ShiftMode::AgentSwitch:
            break;
        }
        plan.slots.reserve(k_agents);
        for (std::size_t k = 0; k < k_agents; ++k) {
            if (schedule && schedule->is_replaced(e, k)) {
                plan.slots.push_back(AgentSpec{"replacement", shift.swap->replacement,
                                               static_cast<std::int64_t>(1000 + k)});
            } else {
                plan.slots.push_back(config.agent_for(k));
            }
        }
    }
    return plans;
}

/// Episode returns for every seed, rows in seed-list order.
inline PerformanceMatrix run(const RunConfig& config) {
    config.validate();
    std::vector<std::vector<double>> rows;
    rows.reserve(config.seeds.size());
    for (SeedId seed : config.seeds) {
        const auto plans = plan_episodes(config, seed);
        std::vector<double> row(config.n_episodes);
        for (std::size_t e = 0; e < config.n_episodes; ++e) {
            row[e] = run_episode(config.env, seed, e, plans[e]);
        }
        rows.push_back(std::move(row));
    }
    std::string label = config.env.name + "/" + config.agent_for(0).name + "/" + config.shift.name;
    return PerformanceMatrix(config.seeds, std::move(rows), std::move(label));
}

/// Runs a controlled config next to its shift-free twin on the same seeds.
inline GroupedExperiment build_grouped_experiment(const RunConfig& config) {
    require(config.shift.controlled(),
            "build_grouped_experiment: only controlled shifts have a counterfactual twin");
    config.validate();
    RunConfig twin = config;
    twin.shift = ShiftSpec{config.shift.name + "-control", ShiftMode::None, {}, 0.5, 0.0, std::nullopt};
    return {run(config), run(twin), config.shift.intervention_episode(config.n_episodes)};
}

/// Human-readable audit of the resolved shift schedule for every seed.
inline std::string describe(const RunConfig& config) {
    config.validate();
    const auto& shift = config.shift;
    std::ostringstream os;
    os << "environment " << config.env.name << " (" << to_string(config.env.kind) << ", K=" << config.env.team_size()
       << ", episode_length=" << config.env.episode_length << ")\n";
    os << "episodes " << config.n_episodes << ", seeds " << config.seeds.size() << "\n";
    os << "shift " << shift.name << " mode=" << to_string(shift.mode) << " epsilon=" << shift.epsilon;
    if (shift.controlled()) {
        os << " T=" << shift.intervention_episode(config.n_episodes) << " (1-based, first shifted episode)";
    }
    if (shift.mode == ShiftMode::RandomPerEpisode) {
        os << " threshold=" << shift.threshold;
    }
    if (shift.swap) {
        os << " replace=" << shift.swap->n_replaced << "x" << to_string(shift.swap->replacement) << " duration=["
           << shift.swap->min_duration << "," << shift.swap->max_duration << "]";
    }
    os << "\n";
    for (SeedId seed : config.seeds) {
        os << "seed " << seed.value << ":";
        if (shift.mode == ShiftMode::RandomPerEpisode) {
            os << " attacked episodes";
            for (std::size_t e = 0; e < config.n_episodes; ++e) {
                if (attacked(seed, e, shift.threshold)) os << ' ' << e;
            }
        } else if (const auto schedule = switch_schedule_for(config, seed)) {
            for (const auto& ev : schedule->events) {
                os << " [start=" << ev.start << " duration=" << ev.duration << " slots=";
                for (std::size_t i = 0; i < ev.slots.size(); ++i) os << (i ? "," : "") << ev.slots[i];
                os << "]";
            }
        } else if (shift.controlled()) {
            os << " perturbed from episode index " << shift.intervention_episode(config.n_episodes) - 1;
        } else {
            os << " no shift";
        }
        os << "\n";
    }
    return os.str();
}

} // namespace shiftbench::harness
