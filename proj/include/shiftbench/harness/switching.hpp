#pragma once

#include "shiftbench/error.hpp"
#include "shiftbench/harness/spec.hpp"
#include "shiftbench/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

namespace shiftbench::harness {

struct SwitchEvent {
    std::size_t start = 0;    // 0-based episode
    std::size_t duration = 0; // as drawn; may run past the last episode
    std::vector<std::size_t> slots;
};

struct SwitchSchedule {
    std::size_t team_size = 0;
    std::vector<SwitchEvent> events;
    std::vector<std::vector<std::size_t>> replaced; // per episode, ascending slot ids

    [[nodiscard]] bool is_replaced(std::size_t episode, std::size_t slot) const {
        const auto& s = replaced.at(episode);
        return std::binary_search(s.begin(), s.end(), slot);
    }
};

/// Which team slots hold replacement agents in each episode.
///
/// Controlled (controlled_at = T, 1-based): slots 0..n-1 are replaced from
/// episode T to the end. Observational: every episode without an active
/// switch starts one with probability start_probability; it lasts a duration
/// drawn uniformly from [min, max] and replaces n distinct random slots. Draws
/// are keyed by (seed, episode, purpose).
inline SwitchSchedule schedule_switches(std::size_t team_size, const AgentSwitch& spec, SeedId seed,
                                        std::size_t n_episodes, std::optional<std::size_t> controlled_at = {}) {
    require(spec.n_replaced >= 1 && spec.n_replaced <= team_size,
            "schedule_switches: n_replaced must lie in [1, K]");
    require(spec.min_duration >= 1 && spec.min_duration <= spec.max_duration,
            "schedule_switches: duration range must satisfy 1 <= a <= b");

    SwitchSchedule out;
    out.team_size = team_size;
    out.replaced.resize(n_episodes);

    if (controlled_at) {
        const std::size_t t = *controlled_at;
        require(t >= 1 && t <= n_episodes, "schedule_switches: intervention episode must lie in [1, N]");
        SwitchEvent event{t - 1, n_episodes - (t - 1), {}};
        event.slots.resize(spec.n_replaced);
        std::iota(event.slots.begin(), event.slots.end(), std::size_t{0});
        for (std::size_t e = t - 1; e < n_episodes; ++e) {
            out.replaced[e] = event.slots;
        }
        out.events.push_back(std::move(event));
        return out;
    }

    std::size_t e = 0;
    while (e < n_episodes) {
        SplitMix64 start_rng(stream_key({seed.value, e, tag_hash("switch-start")}));
        if (start_rng.uniform01() >= spec.start_probability) {
            ++e;
            continue;
        }
        SplitMix64 rng(stream_key({seed.value, e, tag_hash("switch-event")}));
        SwitchEvent event;
        event.start = e;
        event.duration = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(spec.min_duration),
                                                                  static_cast<std::int64_t>(spec.max_duration)));
        std::vector<std::size_t> pool(team_size);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t k = 0; k < spec.n_replaced; ++k) {
            const auto pick = k + rng.uniform_index(team_size - k);
            std::swap(pool[k], pool[pick]);
        }
        event.slots.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(spec.n_replaced));
        std::sort(event.slots.begin(), event.slots.end());
        const std::size_t end = std::min(n_episodes, e + event.duration);
        for (std::size_t k = e; k < end; ++k) {
            out.replaced[k] = event.slots;
        }
        out.events.push_back(std::move(event));
        e = end;
    }
    return out;
}

} // namespace shiftbench::harness
