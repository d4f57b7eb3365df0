#include "shiftbench/causal.hpp"
#include "shiftbench/harness/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

using namespace shiftbench;
using namespace shiftbench::harness;

namespace {

RunConfig chain_config(AgentKind kind, ShiftSpec shift, std::size_t episodes = 60) {
    RunConfig c;
    c.env.name = "chain";
    c.env.kind = EnvKind::ChainWorld;
    c.agents = {AgentSpec{"agent", kind, 0}};
    c.n_episodes = episodes;
    c.shift = std::move(shift);
    return c;
}

RunConfig team_config(ShiftSpec shift, std::size_t episodes = 60) {
    RunConfig c;
    c.env.name = "team";
    c.env.kind = EnvKind::TeamGrid;
    c.env.episode_length = 20;
    c.agents = {AgentSpec{"home", AgentKind::Competent, 0}};
    c.n_episodes = episodes;
    c.shift = std::move(shift);
    return c;
}

ShiftSpec controlled(double epsilon, std::optional<std::size_t> at = {}) {
    return ShiftSpec{"eps", ShiftMode::ControlledAt, at, 0.5, epsilon, std::nullopt};
}

ShiftSpec swap_at_half(std::size_t n, AgentKind replacement) {
    AgentSwitch sw;
    sw.n_replaced = n;
    sw.replacement = replacement;
    return ShiftSpec{"swap", ShiftMode::ControlledAt, std::nullopt, 0.5, 0.0, sw};
}

} // namespace

TEST_CASE("perturb_observation examples", "[harness]") {
    const std::vector<double> obs{0.2, -0.2, 0.9};
    const std::vector<double> plus{1, 1, 1}, minus{-1, -1, -1};
    CHECK(perturb_observation(obs, 0.0, plus) == obs);
    const auto up = perturb_observation(obs, 0.5, plus, {-10, 10});
    CHECK(up[0] == Catch::Approx(0.7));
    CHECK(up[1] == Catch::Approx(0.3));
    CHECK(up[2] == Catch::Approx(1.4));
    CHECK(perturb_observation(obs, 0.5, plus)[2] == 1.0);
    CHECK(perturb_observation(obs, 5.0, minus) == std::vector<double>{-1, -1, -1});
    CHECK_THROWS_AS(perturb_observation(obs, -0.1, plus), ValidationError);
    CHECK_THROWS_AS(perturb_observation(obs, 0.1, std::vector<double>{1}), ValidationError);
}

TEST_CASE("schedule_switches controlled example", "[harness]") {
    AgentSwitch sw;
    sw.n_replaced = 3;
    const auto s = schedule_switches(5, sw, SeedId{0}, 100, 50);
    for (std::size_t e = 0; e < 100; ++e) {
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(s.is_replaced(e, k) == (e >= 49 && k < 3));
        }
    }
    sw.n_replaced = 6;
    CHECK_THROWS_AS(schedule_switches(5, sw, SeedId{0}, 100, 50), ValidationError);
}

TEST_CASE("schedule_switches observational durations and determinism", "[harness]") {
    AgentSwitch sw;
    sw.n_replaced = 2;
    sw.min_duration = 5;
    sw.max_duration = 5;
    sw.start_probability = 0.3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = schedule_switches(5, sw, SeedId{seed}, 200);
        CHECK_FALSE(s.events.empty());
        for (const auto& ev : s.events) {
            CHECK(ev.duration == 5);
            CHECK(ev.slots.size() == 2);
            CHECK(std::set<std::size_t>(ev.slots.begin(), ev.slots.end()).size() == 2);
        }
        const auto again = schedule_switches(5, sw, SeedId{seed}, 200);
        CHECK(again.replaced == s.replaced);
    }

    sw.min_duration = 3;
    sw.max_duration = 9;
    std::set<std::size_t> seen;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& ev : schedule_switches(4, sw, SeedId{seed}, 300).events) {
            CHECK(ev.duration >= 3);
            CHECK(ev.duration <= 9);
            seen.insert(ev.duration);
        }
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("run is deterministic", "[harness]") {
    const auto c = team_config(swap_at_half(2, AgentKind::Untrained));
    CHECK(run(c) == run(c));
    const auto r = chain_config(AgentKind::Mediocre, ShiftSpec{"r", ShiftMode::RandomPerEpisode, {}, 0.3, 0.5, {}});
    CHECK(run(r) == run(r));
}

TEST_CASE("shift-free Competent ChainWorld returns are constant per seed", "[harness]") {
    const auto m = run(chain_config(AgentKind::Competent, ShiftSpec{}));
    for (std::size_t i = 0; i < m.seed_count(); ++i) {
        for (std::size_t t = 1; t < m.episodes(); ++t) CHECK(m.at(i, t) == m.at(i, 0));
    }
}

TEST_CASE("controlled experiments share bitwise pre-period rows", "[harness]") {
    for (const auto& config : {chain_config(AgentKind::Competent, controlled(0.5)),
                               chain_config(AgentKind::Untrained, controlled(1.0, 7)),
                               team_config(swap_at_half(3, AgentKind::OutsidePretrained)),
                               team_config(controlled(0.5))}) {
        const auto exp = build_grouped_experiment(config);
        const auto check = check_pre_treatment_equality(exp.treatment(), exp.control(), exp.intervention_episode(), 0.0);
        CHECK(check.passed);
        CHECK(check.max_abs_diff == 0.0);
    }
}

TEST_CASE("default intervention episode is N/2", "[harness]") {
    const auto exp = build_grouped_experiment(chain_config(AgentKind::Competent, controlled(1.0), 80));
    CHECK(exp.intervention_episode() == 40);
}

TEST_CASE("build_grouped_experiment rejects non-controlled shifts", "[harness]") {
    CHECK_THROWS_AS(build_grouped_experiment(chain_config(AgentKind::Competent, ShiftSpec{})), ValidationError);
    CHECK_THROWS_AS(
        build_grouped_experiment(chain_config(AgentKind::Competent, ShiftSpec{"r", ShiftMode::RandomPerEpisode, {}, 0.5, 0.5, {}})),
        ValidationError);
    AgentSwitch sw;
    CHECK_THROWS_AS(build_grouped_experiment(team_config(ShiftSpec{"s", ShiftMode::AgentSwitch, {}, 0.5, 0, sw})),
                    ValidationError);
}

TEST_CASE("zero-magnitude controlled shift has no impact", "[harness]") {
    const auto exp = build_grouped_experiment(chain_config(AgentKind::Mediocre, controlled(0.0)));
    CHECK(did_post(exp) == 0.0);
    const auto r = build_impact_report(exp);
    for (double v : r.cumulative.values) CHECK(v == 0.0);
}

TEST_CASE("large controlled perturbation lowers ChainWorld returns", "[harness]") {
    const auto exp = build_grouped_experiment(chain_config(AgentKind::Competent, controlled(1.0)));
    const auto r = build_impact_report(exp);
    CHECK(r.did_post < 0.0);
    for (std::size_t t = exp.post_start() + 1; t < r.cumulative.size(); ++t) {
        CHECK(r.cumulative.values[t] <= r.cumulative.values[t - 1]);
    }
}

TEST_CASE("TeamGrid replacements lower returns in the expected order", "[harness]") {
    const double untrained = did_post(build_grouped_experiment(team_config(swap_at_half(1, AgentKind::Untrained))));
    const double outside1 = did_post(build_grouped_experiment(team_config(swap_at_half(1, AgentKind::OutsidePretrained))));
    const double outside3 = did_post(build_grouped_experiment(team_config(swap_at_half(3, AgentKind::OutsidePretrained))));
    CHECK(untrained < 0.0);
    CHECK(outside1 < 0.0);
    CHECK(untrained < outside1);
    CHECK(std::abs(outside3) >= std::abs(outside1));
}

TEST_CASE("TeamGrid shared penalty punishes every Untrained slot", "[harness]") {
    for (std::size_t slot = 0; slot < 5; ++slot) {
        RunConfig base = team_config(ShiftSpec{}, 30);
        RunConfig replaced = base;
        replaced.agents.assign(5, AgentSpec{"home", AgentKind::Competent, 0});
        replaced.agents[slot] = AgentSpec{"rogue", AgentKind::Untrained, 0};
        const auto a = aggregate_mean(run(base)).values, b = aggregate_mean(run(replaced)).values;
        double sa = 0, sb = 0;
        for (std::size_t t = 0; t < a.size(); ++t) sa += a[t], sb += b[t];
        CHECK(sb < sa);
    }
}

TEST_CASE("random attacks hit roughly 1 - threshold of episodes", "[harness]") {
    std::size_t hits = 0;
    for (std::size_t e = 0; e < 10000; ++e) hits += attacked(SeedId{3}, e, 0.8) ? 1 : 0;
    CHECK(hits > 1800);
    CHECK(hits < 2200);
    CHECK(attacked(SeedId{3}, 17, 0.8) == attacked(SeedId{3}, 17, 0.8));
}

TEST_CASE("RunConfig validation", "[harness]") {
    auto c = team_config(ShiftSpec{});
    c.agents.assign(3, AgentSpec{});
    CHECK_THROWS_AS(run(c), ValidationError);
    c = team_config(swap_at_half(6, AgentKind::Untrained));
    CHECK_THROWS_AS(run(c), ValidationError);
    c = chain_config(AgentKind::Competent, controlled(-1.0));
    CHECK_THROWS_AS(run(c), ValidationError);
    c = chain_config(AgentKind::Competent, controlled(1.0, 0));
    CHECK_THROWS_AS(run(c), ValidationError);
    c = chain_config(AgentKind::Competent, ShiftSpec{});
    c.seeds = {SeedId{1}, SeedId{1}};
    CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("describe lists the resolved schedule", "[harness]") {
    AgentSwitch sw;
    sw.min_duration = sw.max_duration = 4;
    sw.start_probability = 0.5;
    auto c = team_config(ShiftSpec{"obs", ShiftMode::AgentSwitch, {}, 0.5, 0.0, sw}, 20);
    c.seeds = default_seeds(2);
    const auto text = describe(c);
    CHECK(text.find("seed 0:") != std::string::npos);
    CHECK(text.find("seed 1:") != std::string::npos);
    CHECK(text.find("duration=4") != std::string::npos);
    CHECK(describe(c) == text);
}
