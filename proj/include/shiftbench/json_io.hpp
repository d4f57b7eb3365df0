#pragma once

// JSON encodings for configs, forecast bands and impact reports.

#include "shiftbench/causal.hpp"
#include "shiftbench/error.hpp"
#include "shiftbench/harness/spec.hpp"
#include "shiftbench/holt.hpp"
#include "shiftbench/interval.hpp"
#include "shiftbench/series.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace shiftbench::json_io {

using nlohmann::json;

inline constexpr std::string_view kEpisodeConvention =
    "episodes are 1-based in reports; T is the first post-intervention episode (pre: t < T, post: t >= T)";

// --- enums -----------------------------------------------------------------

inline harness::EnvKind parse_env_kind(const std::string& s) {
    if (s == "ChainWorld") return harness::EnvKind::ChainWorld;
    if (s == "TeamGrid") return harness::EnvKind::TeamGrid;
    throw ValidationError("unknown environment kind '" + s + "'");
}

inline harness::AgentKind parse_agent_kind(const std::string& s) {
    if (s == "Competent") return harness::AgentKind::Competent;
    if (s == "Mediocre") return harness::AgentKind::Mediocre;
    if (s == "Untrained") return harness::AgentKind::Untrained;
    if (s == "OutsidePretrained") return harness::AgentKind::OutsidePretrained;
    throw ValidationError("unknown agent kind '" + s + "'");
}

inline harness::ShiftMode parse_shift_mode(const std::string& s) {
    if (s == "none") return harness::ShiftMode::None;
    if (s == "controlled") return harness::ShiftMode::ControlledAt;
    if (s == "random") return harness::ShiftMode::RandomPerEpisode;
    if (s == "switch") return harness::ShiftMode::AgentSwitch;
    throw ValidationError("unknown shift mode '" + s + "' (expected none|controlled|random|switch)");
}

// --- config structs --------------------------------------------------------

inline json to_json(const harness::EnvironmentSpec& e) {
    json j{{"name", e.name}, {"kind", std::string(to_string(e.kind))}, {"episode_length", e.episode_length}};
    if (e.kind == harness::EnvKind::ChainWorld) {
        j["states"] = e.chain.states;
        j["obs_dim"] = e.chain.obs_dim;
        j["cue_margin"] = e.chain.cue_margin;
        j["goal_reward"] = e.chain.goal_reward;
        j["step_cost"] = e.chain.step_cost;
    } else {
        j["team_size"] = e.team.team_size;
        j["grid_size"] = e.team.grid_size;
        j["cover_weight"] = e.team.cover_weight;
        j["move_weight"] = e.team.move_weight;
        j["shared_penalty"] = e.team.shared_penalty;
        j["imbalance_budget"] = e.team.imbalance_budget;
    }
    return j;
}

inline harness::EnvironmentSpec environment_from_json(const json& j) {
    harness::EnvironmentSpec e;
    e.kind = parse_env_kind(j.at("kind").get<std::string>());
    e.name = j.value("name", std::string(to_string(e.kind)));
    e.episode_length = j.value("episode_length", e.episode_length);
    if (e.kind == harness::EnvKind::ChainWorld) {
        e.chain.states = j.value("states", e.chain.states);
        e.chain.obs_dim = j.value("obs_dim", e.chain.obs_dim);
        e.chain.cue_margin = j.value("cue_margin", e.chain.cue_margin);
        e.chain.goal_reward = j.value("goal_reward", e.chain.goal_reward);
        e.chain.step_cost = j.value("step_cost", e.chain.step_cost);
    } else {
        e.episode_length = j.value("episode_length", std::size_t{20});
        e.team.team_size = j.value("team_size", e.team.team_size);
        e.team.grid_size = j.value("grid_size", e.team.grid_size);
        e.team.cover_weight = j.value("cover_weight", e.team.cover_weight);
        e.team.move_weight = j.value("move_weight", e.team.move_weight);
        e.team.shared_penalty = j.value("shared_penalty", e.team.shared_penalty);
        e.team.imbalance_budget = j.value("imbalance_budget", e.team.imbalance_budget);
    }
    e.validate();
    return e;
}

inline json to_json(const harness::AgentSpec& a) {
    return json{{"name", a.name}, {"kind", std::string(to_string(a.kind))}, {"seed_offset", a.seed_offset}};
}

inline harness::AgentSpec agent_from_json(const json& j) {
    harness::AgentSpec a;
    a.kind = parse_agent_kind(j.at("kind").get<std::string>());
    a.name = j.value("name", std::string(to_string(a.kind)));
    a.seed_offset = j.value("seed_offset", std::int64_t{0});
    return a;
}

inline json to_json(const harness::ShiftSpec& s) {
    json j{{"name", s.name}, {"mode", std::string(to_string(s.mode))}, {"epsilon", s.epsilon}};
    if (s.mode == harness::ShiftMode::ControlledAt && s.at_episode) j["at"] = *s.at_episode;
    if (s.mode == harness::ShiftMode::RandomPerEpisode) j["threshold"] = s.threshold;
    if (s.swap) {
        j["switch"] = json{{"n_replaced", s.swap->n_replaced},
                           {"replacement", std::string(to_string(s.swap->replacement))},
                           {"duration", {s.swap->min_duration, s.swap->max_duration}},
                           {"start_probability", s.swap->start_probability}};
    }
    return j;
}

inline harness::ShiftSpec shift_from_json(const json& j) {
    harness::ShiftSpec s;
    s.mode = parse_shift_mode(j.value("mode", std::string("none")));
    s.name = j.value("name", std::string(to_string(s.mode)));
    s.epsilon = j.value("epsilon", 0.0);
    if (j.contains("at")) s.at_episode = j.at("at").get<std::size_t>();
    if (s.mode == harness::ShiftMode::RandomPerEpisode) {
        require(j.contains("threshold"), "shift '" + s.name + "': random mode requires 'threshold'");
        s.threshold = j.at("threshold").get<double>();
    }
    if (j.contains("switch")) {
        const auto& w = j.at("switch");
        harness::AgentSwitch sw;
        sw.n_replaced = w.value("n_replaced", sw.n_replaced);
        if (w.contains("replacement")) sw.replacement = parse_agent_kind(w.at("replacement").get<std::string>());
        if (w.contains("duration")) {
            const auto& d = w.at("duration");
            require(d.is_array() && d.size() == 2, "shift '" + s.name + "': duration must be [min, max]");
            sw.min_duration = d[0].get<std::size_t>();
            sw.max_duration = d[1].get<std::size_t>();
        }
        sw.start_probability = w.value("start_probability", sw.start_probability);
        s.swap = sw;
    }
    return s;
}

inline std::vector<SeedId> seeds_from_json(const json& j) {
    if (j.is_number_unsigned() || j.is_number_integer()) {
        const auto count = j.get<std::int64_t>();
        require(count >= 1, "seeds: count must be >= 1");
        return default_seeds(static_cast<std::size_t>(count));
    }
    std::vector<SeedId> seeds;
    for (const auto& v : j) seeds.emplace_back(v.get<std::uint64_t>());
    return seeds;
}

inline json seeds_to_json(const std::vector<SeedId>& seeds) {
    json arr = json::array();
    for (auto s : seeds) arr.push_back(s.value);
    return arr;
}

inline harness::RunConfig run_config_from_json(const json& j) {
    harness::RunConfig c;
    c.env = environment_from_json(j.at("environment"));
    c.agents.clear();
    if (j.contains("agents")) {
        for (const auto& a : j.at("agents")) c.agents.push_back(agent_from_json(a));
    } else {
        c.agents.push_back(agent_from_json(j.at("agent")));
    }
    if (j.contains("seeds")) c.seeds = seeds_from_json(j.at("seeds"));
    c.n_episodes = j.at("episodes").get<std::size_t>();
    if (j.contains("shift")) c.shift = shift_from_json(j.at("shift"));
    c.validate();
    return c;
}

inline json to_json(const harness::RunConfig& c) {
    json agents = json::array();
    for (const auto& a : c.agents) agents.push_back(to_json(a));
    return json{{"environment", to_json(c.env)},
                {"agents", agents},
                {"seeds", seeds_to_json(c.seeds)},
                {"episodes", c.n_episodes},
                {"shift", to_json(c.shift)}};
}

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// --- analysis results ------------------------------------------------------

inline json to_json(const ForecastBand& b) {
    return json{{"horizon", b.horizon}, {"level", b.level}, {"point", b.point}, {"lower", b.lower}, {"upper", b.upper}};
}

inline ForecastBand band_from_json(const json& j) {
    ForecastBand b;
    b.horizon = j.at("horizon").get<std::size_t>();
    b.level = j.at("level").get<double>();
    b.point = j.at("point").get<std::vector<double>>();
    b.lower = j.at("lower").get<std::vector<double>>();
    b.upper = j.at("upper").get<std::vector<double>>();
    require(b.point.size() == b.horizon && b.lower.size() == b.horizon && b.upper.size() == b.horizon,
            "ForecastBand: array lengths must equal horizon");
    return b;
}

inline json to_json(const FittedTrendModel& m) {
    return json{{"alpha", m.params.alpha}, {"beta", m.params.beta}, {"phi", m.params.phi},
                {"l0", m.params.l0},       {"b0", m.params.b0},     {"sse", m.sse},
                {"sigma", m.sigma},        {"observations", m.size()}};
}

inline json to_json(const ImpactReport& r) {
    return json{{"T", r.intervention_episode},
                {"window", r.window},
                {"did_full", r.did_full},
                {"did_post", r.did_post},
                {"pre_gap", r.pre_gap},
                {"pre_gap_tolerance", r.pre_gap_tolerance},
                {"fixed_seed_violation", r.fixed_seed_violation},
                {"episode_convention", kEpisodeConvention},
                {"pointwise", r.pointwise.values},
                {"cumulative", r.cumulative.values},
                {"original_treated", r.original_treated.values},
                {"original_counterfactual", r.original_counterfactual.values}};
}

inline json to_json(const EqualityReport& r, const std::vector<SeedId>& seeds) {
    json per_seed = json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        per_seed.push_back(json{{"seed", seeds[i].value}, {"max_abs_diff", r.per_seed_max[i]}});
    }
    json j{{"passed", r.passed},
           {"tolerance", r.tolerance},
           {"compared_episodes", r.compared_episodes},
           {"max_abs_diff", r.max_abs_diff},
           {"per_seed", per_seed}};
    if (r.worst) {
        j["worst"] = json{{"seed", r.worst->seed.value}, {"episode", r.worst->episode}};
    }
    return j;
}

inline json to_json(const TrendComparison& c) {
    return json{{"verdict", std::string(to_string(c.verdict))},
                {"final_step_disjoint", c.final_step_disjoint},
                {"disjoint_every_step", c.disjoint_everywhere()},
                {"overlap_mask", c.overlap_mask}};
}

} // namespace shiftbench::json_io
