#pragma once

#include "shiftbench/harness/agents.hpp"
#include "shiftbench/harness/perturb.hpp"
#include "shiftbench/harness/spec.hpp"
#include "shiftbench/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace shiftbench::harness {

/// What one episode sees: perturbation magnitude (0 = clean) and the agent
/// occupying each team slot.
struct EpisodePlan {
    double epsilon = 0.0;
    std::vector<AgentSpec> slots;
};

/// One ChainWorld rollout. The start state is fixed per seed, so an
/// unperturbed deterministic policy earns the same return every episode.
inline double chain_world_episode(const EnvironmentSpec& env, SeedId seed, std::size_t episode,
                                  const EpisodePlan& plan) {
    const auto& p = env.chain;
    const std::size_t goal = p.states - 1;
    const ChainPolicy policy(plan.slots.at(0), seed, 0, p);

    std::vector<double> clean = chain_cue_code(seed, p.obs_dim);
    for (double& f : clean) {
        f *= p.cue_margin;
    }

    SplitMix64 start_rng(stream_key({seed.value, tag_hash("chain-start")}));
    std::size_t position = start_rng.uniform_index(std::max<std::size_t>(1, p.states / 2));

    double total = 0.0;
    for (std::size_t step = 0; step < env.episode_length; ++step) {
        ChainAction action;
        if (plan.epsilon > 0.0) {
            const auto noise = sign_noise(stream_key({seed.value, episode, step, tag_hash("fgsm")}), p.obs_dim);
            action = policy.act(perturb_observation(clean, plan.epsilon, noise));
        } else {
            action = policy.act(clean);
        }
        if (action == ChainAction::Right) {
            position = std::min(position + 1, goal);
        } else if (position > 0) {
            --position;
        }
        total += position == goal ? p.goal_reward : -p.step_cost;
    }
    return total;
}

/// K distinct landmark cells for (seed, episode), sorted by (y, x).
inline std::vector<std::pair<std::size_t, std::size_t>> team_grid_landmarks(const TeamGridParams& p, SeedId seed,
                                                                            std::size_t episode) {
    const std::size_t cells = p.grid_size * p.grid_size;
    std::vector<std::size_t> pool(cells);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    SplitMix64 rng(stream_key({seed.value, episode, tag_hash("landmarks")}));
    for (std::size_t k = 0; k < p.team_size; ++k) {
        std::swap(pool[k], pool[k + rng.uniform_index(cells - k)]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(p.team_size));
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < p.team_size; ++k) {
        out.emplace_back(pool[k] % p.grid_size, pool[k] / p.grid_size);
    }
    return out;
}

inline double team_grid_episode(const EnvironmentSpec& env, SeedId seed, std::size_t episode,
                                const EpisodePlan& plan) {
    const auto& p = env.team;
    const std::size_t k_agents = p.team_size;
    const auto landmarks = team_grid_landmarks(p, seed, episode);

    std::vector<GridPolicy> policies;
    policies.reserve(k_agents);
    for (std::size_t k = 0; k < k_agents; ++k) {
        policies.emplace_back(plan.slots.at(k), seed, k, p);
    }

    std::vector<std::pair<std::size_t, std::size_t>> positions(k_agents);
    SplitMix64 start_rng(stream_key({seed.value, episode, tag_hash("starts")}));
    for (auto& pos : positions) {
        pos = {start_rng.uniform_index(p.grid_size), start_rng.uniform_index(p.grid_size)};
    }

    std::vector<double> clean(2 * k_agents);
    for (std::size_t i = 0; i < k_agents; ++i) {
        clean[2 * i] = static_cast<double>(landmarks[i].first);
        clean[2 * i + 1] = static_cast<double>(landmarks[i].second);
    }
    const ObservationRange range{0.0, static_cast<double>(p.grid_size - 1)};

    double total = 0.0;
    std::vector<GridAction> actions(k_agents);
    for (std::size_t step = 0; step < env.episode_length; ++step) {
        for (std::size_t k = 0; k < k_agents; ++k) {
            GridObservation obs{positions[k].first, positions[k].second, k, step, clean};
            if (plan.epsilon > 0.0) {
                const auto noise =
                    sign_noise(stream_key({seed.value, episode, step, k, tag_hash("fgsm")}), clean.size());
                obs.landmarks = perturb_observation(clean, plan.epsilon, noise, range);
            }
            actions[k] = policies[k].act(obs);
        }

        std::size_t moves = 0;
        for (std::size_t k = 0; k < k_agents; ++k) {
            auto& [x, y] = positions[k];
            switch (actions[k]) {
            case GridAction::Stay: break;
            case GridAction::Right: x = std::min(x + 1, p.grid_size - 1); break;
            case GridAction::Left: x = x > 0 ? x - 1 : 0; break;
            case GridAction::Up: y = std::min(y + 1, p.grid_size - 1); break;
            case GridAction::Down: y = y > 0 ? y - 1 : 0; break;
            }
            moves += actions[k] != GridAction::Stay ? 1 : 0;
        }

        std::size_t covered = 0;
        for (const auto& lm : landmarks) {
            covered += std::find(positions.begin(), positions.end(), lm) != positions.end() ? 1 : 0;
        }
        std::size_t stray = 0;
        for (const auto& pos : positions) {
            stray += std::find(landmarks.begin(), landmarks.end(), pos) == landmarks.end() ? 1 : 0;
        }
        const std::size_t imbalance = (k_agents - covered) + stray;
        total += p.cover_weight * static_cast<double>(covered) - p.move_weight * static_cast<double>(moves);
        if (imbalance > p.imbalance_budget) {
            total -= p.shared_penalty * static_cast<double>(k_agents);
        }
    }
    return total;
}

inline double run_episode(const EnvironmentSpec& env, SeedId seed, std::size_t episode, const EpisodePlan& plan) {
    return env.kind == EnvKind::ChainWorld ? chain_world_episode(env, seed, episode, plan)
                                           : team_grid_episode(env, seed, episode, plan);
}

} // namespace shiftbench::harness
