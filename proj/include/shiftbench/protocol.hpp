#pragma once

// End-to-end evaluation over environments x algorithms x shifts.
//
// Controlled shifts run the causal branch (grouped experiment, impact report,
// cumulative ordering) plus a forecast fitted on the treated series.
// Observational shifts run the forecast branch only (rolling mean, Holt fit,
// bootstrap band, trend comparison).

#include "shiftbench/causal.hpp"
#include "shiftbench/csv.hpp"
#include "shiftbench/error.hpp"
#include "shiftbench/harness/runner.hpp"
#include "shiftbench/holt.hpp"
#include "shiftbench/interval.hpp"
#include "shiftbench/json_io.hpp"
#include "shiftbench/series.hpp"
#include "shiftbench/svg.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace shiftbench {

inline constexpr std::string_view kVersion = "0.1.0";

struct ProtocolConfig {
    std::vector<harness::EnvironmentSpec> environments;
    std::vector<harness::AgentSpec> algorithms;
    std::vector<harness::ShiftSpec> shifts;
    std::vector<SeedId> seeds = default_seeds();
    std::size_t impact_episodes = 0; // required, no default
    std::size_t forecast_horizon = 100;
    double interval_level = 0.99;
    std::size_t rolling_window = 25;
    std::size_t bootstrap_paths = 5000;
    SeedId noise_seed{0};
    PhiBounds phi_bounds;

    void validate() const {
        require(!environments.empty(), "ProtocolConfig: at least one environment is required");
        require(!algorithms.empty(), "ProtocolConfig: at least one algorithm is required");
        require(!shifts.empty(), "ProtocolConfig: at least one shift is required");
        require(!seeds.empty(), "ProtocolConfig: seed list is empty");
        require(impact_episodes >= 1, "ProtocolConfig: impact_episodes is required and must be >= 1");
        require(forecast_horizon >= 1, "ProtocolConfig: forecast_horizon must be >= 1");
        require(interval_level > 0.0 && interval_level < 1.0, "ProtocolConfig: interval_level must lie in (0, 1)");
        require(rolling_window >= 1, "ProtocolConfig: rolling_window must be >= 1");
        require(bootstrap_paths >= 1, "ProtocolConfig: bootstrap_paths must be >= 1");
        phi_bounds.validate();
        auto unique_names = [](const auto& items, const char* what) {
            std::set<std::string> names;
            for (const auto& it : items) {
                require(names.insert(it.name).second, std::string("ProtocolConfig: duplicate ") + what + " name '" +
                                                          it.name + "'");
            }
        };
        unique_names(environments, "environment");
        unique_names(algorithms, "algorithm");
        unique_names(shifts, "shift");
    }
};

struct CellResult {
    std::string environment;
    std::string algorithm;
    std::string shift;
    bool controlled = false;
    std::optional<std::string> skip_reason;

    std::optional<PerformanceMatrix> treatment; // the measured runs (treated runs for controlled shifts)
    std::optional<PerformanceMatrix> control;
    std::optional<ImpactReport> impact;
    std::optional<EqualityReport> pre_check;
    MeanSeries history; // rolling-mean series the forecast was fitted on
    std::optional<FittedTrendModel> model;
    std::optional<ForecastBand> band;

    [[nodiscard]] bool ok() const noexcept { return !skip_reason.has_value(); }
    [[nodiscard]] std::string id() const { return environment + "__" + algorithm + "__" + shift; }
};

struct PairwiseVerdict {
    std::string environment;
    std::string shift;
    std::string first;
    std::string second;
    std::optional<CumulativeOrder> cumulative;
    std::optional<TrendComparison> trend;
};

struct ProtocolReport {
    ProtocolConfig config;
    std::vector<CellResult> cells; // sorted by (environment, algorithm, shift)
    std::vector<PairwiseVerdict> comparisons;
};

namespace detail {

inline void run_forecast_branch(CellResult& cell, const PerformanceMatrix& measured, const ProtocolConfig& config) {
    cell.history = rolling_mean(aggregate_mean(measured), config.rolling_window);
    cell.model = fit(cell.history, config.phi_bounds);
    cell.band = prediction_interval(*cell.model, config.forecast_horizon,
                                    {config.interval_level, config.bootstrap_paths, config.noise_seed});
}

inline CellResult run_cell(const ProtocolConfig& config, const harness::EnvironmentSpec& env,
                           const harness::AgentSpec& algorithm, const harness::ShiftSpec& shift) {
    CellResult cell;
    cell.environment = env.name;
    cell.algorithm = algorithm.name;
    cell.shift = shift.name;
    cell.controlled = shift.controlled();
    try {
        harness::RunConfig run_config;
        run_config.env = env;
        run_config.agents = {algorithm};
        run_config.seeds = config.seeds;
        run_config.n_episodes = config.impact_episodes;
        run_config.shift = shift;
        if (shift.controlled()) {
            const auto exp = harness::build_grouped_experiment(run_config);
            cell.pre_check = check_pre_treatment_equality(exp.treatment(), exp.control(),
                                                          exp.intervention_episode(), 0.0);
            cell.impact = build_impact_report(exp, config.rolling_window);
            cell.treatment = exp.treatment();
            cell.control = exp.control();
        } else {
            cell.treatment = harness::run(run_config);
        }
        run_forecast_branch(cell, *cell.treatment, config);
    } catch (const std::exception& e) {
        CellResult skipped;
        skipped.environment = cell.environment;
        skipped.algorithm = cell.algorithm;
        skipped.shift = cell.shift;
        skipped.controlled = cell.controlled;
        skipped.skip_reason = e.what();
        return skipped;
    }
    return cell;
}

} // namespace detail

inline ProtocolReport run_protocol(const ProtocolConfig& config) {
    config.validate();
    ProtocolReport report;
    report.config = config;
    for (const auto& env : config.environments) {
        for (const auto& algorithm : config.algorithms) {
            for (const auto& shift : config.shifts) {
                report.cells.push_back(detail::run_cell(config, env, algorithm, shift));
            }
        }
    }
    std::sort(report.cells.begin(), report.cells.end(), [](const CellResult& a, const CellResult& b) {
        return std::tie(a.environment, a.algorithm, a.shift) < std::tie(b.environment, b.algorithm, b.shift);
    });

    for (const auto& env : config.environments) {
        for (const auto& shift : config.shifts) {
            std::vector<const CellResult*> group;
            for (const auto& cell : report.cells) {
                if (cell.environment == env.name && cell.shift == shift.name && cell.ok()) group.push_back(&cell);
            }
            for (std::size_t i = 0; i < group.size(); ++i) {
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    PairwiseVerdict v{env.name, shift.name, group[i]->algorithm, group[j]->algorithm, {}, {}};
                    if (group[i]->impact && group[j]->impact) {
                        v.cumulative = compare_cumulative(*group[i]->impact, *group[j]->impact);
                    }
                    if (group[i]->band && group[j]->band) {
                        v.trend = compare_trends(*group[i]->band, *group[j]->band);
                    }
                    report.comparisons.push_back(std::move(v));
                }
            }
        }
    }
    std::sort(report.comparisons.begin(), report.comparisons.end(), [](const auto& a, const auto& b) {
        return std::tie(a.environment, a.shift, a.first, a.second) < std::tie(b.environment, b.shift, b.first, b.second);
    });
    return report;
}

// --- config and report JSON ------------------------------------------------

inline ProtocolConfig protocol_config_from_json(const json_io::json& j) {
    ProtocolConfig c;
    for (const auto& e : j.at("environments")) c.environments.push_back(json_io::environment_from_json(e));
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(json_io::agent_from_json(a));
    for (const auto& s : j.at("shifts")) c.shifts.push_back(json_io::shift_from_json(s));
    if (j.contains("seeds")) c.seeds = json_io::seeds_from_json(j.at("seeds"));
    require(j.contains("impact_episodes"), "protocol config: 'impact_episodes' is required");
    c.impact_episodes = j.at("impact_episodes").get<std::size_t>();
    c.forecast_horizon = j.value("forecast_horizon", c.forecast_horizon);
    c.interval_level = j.value("interval_level", c.interval_level);
    c.rolling_window = j.value("rolling_window", c.rolling_window);
    c.bootstrap_paths = j.value("bootstrap_paths", c.bootstrap_paths);
    c.noise_seed = SeedId{j.value("noise_seed", std::uint64_t{0})};
    if (j.contains("phi_bounds")) {
        const auto& b = j.at("phi_bounds");
        require(b.is_array() && b.size() == 2, "protocol config: phi_bounds must be [lower, upper]");
        c.phi_bounds = {b[0].get<double>(), b[1].get<double>()};
    }
    c.validate();
    return c;
}

inline json_io::json parameters_json(const ProtocolConfig& c) {
    return json_io::json{{"seeds", json_io::seeds_to_json(c.seeds)},
                         {"seed_count", c.seeds.size()},
                         {"impact_episodes", c.impact_episodes},
                         {"forecast_horizon", c.forecast_horizon},
                         {"interval_level", c.interval_level},
                         {"rolling_window", c.rolling_window},
                         {"bootstrap_paths", c.bootstrap_paths},
                         {"noise_seed", c.noise_seed.value},
                         {"phi_bounds", {c.phi_bounds.lower, c.phi_bounds.upper}},
                         {"trend_model", "Holt linear damped trend, l0=y[0], b0=y[1]-y[0], grid + Nelder-Mead SSE fit"},
                         {"interval_method", "residual bootstrap, per-step empirical quantiles, monotone width"},
                         {"trend_rule", "verdict uses final-step interval disjointness; overlap_mask gives every step"},
                         {"cumulative_rule", "higher cumulative impact at the final episode is better"},
                         {"episode_convention", json_io::kEpisodeConvention},
                         {"perturbation", "gradient-free FGSM analog: obs + epsilon * seeded sign vector, clamped"}};
}

inline json_io::json config_json(const ProtocolConfig& c) {
    json_io::json envs = json_io::json::array(), algs = json_io::json::array(), shifts = json_io::json::array();
    for (const auto& e : c.environments) envs.push_back(json_io::to_json(e));
    for (const auto& a : c.algorithms) algs.push_back(json_io::to_json(a));
    for (const auto& s : c.shifts) shifts.push_back(json_io::to_json(s));
    return json_io::json{{"environments", envs}, {"algorithms", algs}, {"shifts", shifts}};
}

struct ExportOptions {
    bool plots = true;
};

inline json_io::json cell_json(const CellResult& cell, const ExportOptions& options) {
    json_io::json j{{"id", cell.id()},
                    {"environment", cell.environment},
                    {"algorithm", cell.algorithm},
                    {"shift", cell.shift},
                    {"status", cell.ok() ? "ok" : "skipped"}};
    if (!cell.ok()) {
        j["skip_reason"] = *cell.skip_reason;
        return j;
    }
    j["branches"] = cell.controlled ? json_io::json{"impact", "forecast"} : json_io::json{"forecast"};
    json_io::json files{{"returns_csv", "cells/" + cell.id() + "/returns.csv"}};
    if (cell.control) files["control_csv"] = "cells/" + cell.id() + "/control.csv";
    if (options.plots) {
        files["svg"] = "cells/" + cell.id() + (cell.impact ? "/impact.svg" : "/forecast.svg");
    }
    j["files"] = files;
    if (cell.impact) j["impact"] = json_io::to_json(*cell.impact);
    if (cell.pre_check && cell.treatment) j["pre_treatment_check"] = json_io::to_json(*cell.pre_check, cell.treatment->seeds());
    j["forecast"] = json_io::json{{"history", cell.history.values},
                                  {"model", json_io::to_json(*cell.model)},
                                  {"band", json_io::to_json(*cell.band)}};
    return j;
}

inline json_io::json report_json(const ProtocolReport& report, const ExportOptions& options = {}) {
    json_io::json cells = json_io::json::array();
    for (const auto& c : report.cells) cells.push_back(cell_json(c, options));
    json_io::json comparisons = json_io::json::array();
    for (const auto& v : report.comparisons) {
        json_io::json j{{"environment", v.environment}, {"shift", v.shift}, {"first", v.first}, {"second", v.second}};
        if (v.cumulative) j["cumulative_order"] = std::string(to_string(*v.cumulative));
        if (v.trend) j["trend"] = json_io::to_json(*v.trend);
        comparisons.push_back(std::move(j));
    }
    return json_io::json{{"tool", {{"name", "shiftbench"}, {"version", std::string(kVersion)}}},
                         {"parameters", parameters_json(report.config)},
                         {"config", config_json(report.config)},
                         {"cells", cells},
                         {"comparisons", comparisons}};
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace detail

/// Layout under `dir`:
///   report.json
///   cells/<env>__<algorithm>__<shift>/returns.csv   measured (treated) runs
///   cells/<id>/control.csv                         controlled shifts only
///   cells/<id>/impact.svg | forecast.svg           one plot per cell, unless disabled
/// Skipped cells get no directory.
inline void export_report(const ProtocolReport& report, const std::filesystem::path& dir,
                          const ExportOptions& options = {}) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& cell : report.cells) {
        if (!cell.ok()) continue;
        const auto cell_dir = dir / "cells" / cell.id();
        std::filesystem::create_directories(cell_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + cell_dir.string() + ": " + ec.message());
        csv::write_file((cell_dir / "returns.csv").string(), *cell.treatment);
        if (cell.control) csv::write_file((cell_dir / "control.csv").string(), *cell.control);
        if (!options.plots) continue;
        const std::string title = cell.environment + " / " + cell.algorithm + " / " + cell.shift;
        if (cell.impact) {
            detail::write_text(cell_dir / "impact.svg", svg::render_impact_svg(*cell.impact, title));
        } else {
            detail::write_text(cell_dir / "forecast.svg",
                               svg::render_forecast_svg(cell.history, {{cell.algorithm, *cell.band}}, title));
        }
    }
    detail::write_text(dir / "report.json", report_json(report, options).dump(2) + "\n");
}

} // namespace shiftbench
