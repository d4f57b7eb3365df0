// shiftbench command line: run, impact, forecast, protocol, validate.

#include "shiftbench/shiftbench.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace shiftbench;
using json_io::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

struct Common {
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> horizon;
    std::optional<double> level;
    std::optional<std::size_t> window;
    bool no_plots = false;
    std::string out = ".";
};

int cmd_run(const std::string& config_path, const Common& common, bool describe_only) {
    auto config = json_io::run_config_from_json(json_io::load_file(config_path));
    if (common.seeds) config.seeds = default_seeds(*common.seeds);
    if (describe_only) {
        std::cout << harness::describe(config);
        return 0;
    }
    const auto matrix = harness::run(config);
    ensure_dir(common.out);
    const auto path = fs::path(common.out) / "returns.csv";
    csv::write_file(path.string(), matrix);
    std::cout << "wrote " << path.string() << " (" << matrix.seed_count() << " seeds x " << matrix.episodes()
              << " episodes)\n";
    return 0;
}

int cmd_impact(const std::string& treatment_path, const std::string& control_path, std::optional<std::size_t> at,
               const std::string& config_path, double tol, const Common& common) {
    const std::size_t window = common.window.value_or(25);
    std::optional<GroupedExperiment> exp;
    ensure_dir(common.out);
    if (!config_path.empty()) {
        auto config = json_io::run_config_from_json(json_io::load_file(config_path));
        if (common.seeds) config.seeds = default_seeds(*common.seeds);
        if (at) config.shift.at_episode = *at;
        exp = harness::build_grouped_experiment(config);
        csv::write_file((fs::path(common.out) / "treatment.csv").string(), exp->treatment());
        csv::write_file((fs::path(common.out) / "control.csv").string(), exp->control());
    } else {
        if (treatment_path.empty() || control_path.empty() || !at) {
            throw ValidationError("impact: give --config, or --treatment, --control and --at");
        }
        exp.emplace(csv::read_file(treatment_path), csv::read_file(control_path), *at);
    }
    const auto report = build_impact_report(*exp, window, tol);
    auto j = json_io::to_json(report);
    j["pre_treatment_check"] = json_io::to_json(
        check_pre_treatment_equality(exp->treatment(), exp->control(), exp->intervention_episode(), tol),
        exp->treatment().seeds());
    write_text(fs::path(common.out) / "impact.json", j.dump(2) + "\n");
    if (!common.no_plots) {
        write_text(fs::path(common.out) / "impact.svg", svg::render_impact_svg(report));
    }
    std::cout << "did_full=" << report.did_full << " did_post=" << report.did_post
              << " cumulative_final=" << report.final_cumulative() << " pre_gap=" << report.pre_gap << "\n";
    if (report.fixed_seed_violation) {
        std::cerr << "warning: pre-treatment gap " << report.pre_gap
                  << " exceeds tolerance; the fixed-seed assumption does not hold for this data\n";
    }
    return 0;
}

int cmd_forecast(const std::vector<std::string>& inputs, std::size_t paths, std::uint64_t noise_seed,
                 const Common& common) {
    const std::size_t window = common.window.value_or(25);
    const std::size_t horizon = common.horizon.value_or(100);
    const double level = common.level.value_or(0.99);
    ensure_dir(common.out);

    json series = json::array();
    std::vector<std::pair<std::string, ForecastBand>> bands;
    std::optional<MeanSeries> first_history;
    for (const auto& path : inputs) {
        const auto matrix = csv::read_file(path);
        const auto history = rolling_mean(aggregate_mean(matrix), window);
        const auto model = fit(history);
        auto band = prediction_interval(model, horizon, {level, paths, SeedId{noise_seed}});
        const std::string label = fs::path(path).stem().string();
        series.push_back(json{{"label", label},
                              {"source", path},
                              {"history", history.values},
                              {"model", json_io::to_json(model)},
                              {"band", json_io::to_json(band)}});
        if (!first_history) first_history = history;
        bands.emplace_back(label, std::move(band));
    }
    json comparisons = json::array();
    for (std::size_t i = 0; i < bands.size(); ++i) {
        for (std::size_t k = i + 1; k < bands.size(); ++k) {
            auto c = json_io::to_json(compare_trends(bands[i].second, bands[k].second));
            c["first"] = bands[i].first;
            c["second"] = bands[k].first;
            comparisons.push_back(std::move(c));
        }
    }
    const json out{{"window", window}, {"series", series}, {"comparisons", comparisons}};
    write_text(fs::path(common.out) / "forecast.json", out.dump(2) + "\n");
    if (!common.no_plots) {
        write_text(fs::path(common.out) / "forecast.svg", svg::render_forecast_svg(*first_history, bands));
    }
    for (const auto& c : comparisons) {
        std::cout << c["first"].get<std::string>() << " vs " << c["second"].get<std::string>() << ": "
                  << c["verdict"].get<std::string>() << "\n";
    }
    return 0;
}

int cmd_protocol(const std::string& config_path, const Common& common) {
    auto config = protocol_config_from_json(json_io::load_file(config_path));
    if (common.seeds) config.seeds = default_seeds(*common.seeds);
    if (common.horizon) config.forecast_horizon = *common.horizon;
    if (common.level) config.interval_level = *common.level;
    if (common.window) config.rolling_window = *common.window;
    const auto report = run_protocol(config);
    export_report(report, common.out, ExportOptions{!common.no_plots});
    std::size_t skipped = 0;
    for (const auto& c : report.cells) skipped += c.ok() ? 0 : 1;
    std::cout << "wrote " << (fs::path(common.out) / "report.json").string() << " (" << report.cells.size()
              << " cells, " << skipped << " skipped)\n";
    return 0;
}

int cmd_validate(const std::string& a, const std::string& b, std::size_t at, double tol) {
    const auto treatment = csv::read_file(a);
    const auto control = csv::read_file(b);
    const auto report = check_pre_treatment_equality(treatment, control, at, tol);
    std::cout << json_io::to_json(report, treatment.seeds()).dump(2) << "\n";
    return report.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shiftbench: evaluate agents under test-time distribution shift"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seeds", common.seeds, "Use seeds 0..N-1 instead of the configured list");
        sub->add_option("--out", common.out, "Output directory");
    };
    auto add_analysis = [&](CLI::App* sub) {
        sub->add_option("--horizon", common.horizon, "Forecast horizon in episodes (default 100)");
        sub->add_option("--level", common.level, "Prediction interval level (default 0.99)");
        sub->add_option("--window", common.window, "Rolling mean window (default 25)");
        sub->add_flag("--no-plots", common.no_plots, "Skip SVG output");
    };

    std::string config_path;
    bool describe = false;
    auto* run = app.add_subcommand("run", "Run one harness config and write returns.csv");
    run->add_option("config", config_path, "RunConfig JSON")->required()->check(CLI::ExistingFile);
    run->add_flag("--describe", describe, "Print the resolved shift schedule instead of running");
    add_common(run);

    std::string treatment_path, control_path;
    std::optional<std::size_t> at;
    double tol = 0.0;
    auto* impact = app.add_subcommand("impact", "Difference-in-differences impact report");
    impact->add_option("--treatment", treatment_path, "Treatment CSV")->check(CLI::ExistingFile);
    impact->add_option("--control", control_path, "Control CSV")->check(CLI::ExistingFile);
    impact->add_option("--config", config_path, "Controlled RunConfig JSON")->check(CLI::ExistingFile);
    impact->add_option("--at", at, "Intervention episode T (1-based, first post episode)");
    impact->add_option("--tol", tol, "Pre-treatment gap tolerance (default 0)");
    add_common(impact);
    add_analysis(impact);

    std::vector<std::string> inputs;
    std::size_t paths = 5000;
    std::uint64_t noise_seed = 0;
    auto* forecast = app.add_subcommand("forecast", "Holt damped-trend forecast with prediction intervals");
    forecast->add_option("inputs", inputs, "Returns CSV files")->required()->check(CLI::ExistingFile);
    forecast->add_option("--paths", paths, "Bootstrap paths (default 5000)");
    forecast->add_option("--noise-seed", noise_seed, "Bootstrap seed (default 0)");
    add_common(forecast);
    add_analysis(forecast);

    auto* protocol = app.add_subcommand("protocol", "Run the full evaluation protocol");
    protocol->add_option("config", config_path, "ProtocolConfig JSON")->required()->check(CLI::ExistingFile);
    add_common(protocol);
    add_analysis(protocol);

    std::string csv_a, csv_b;
    std::size_t validate_at = 0;
    auto* validate = app.add_subcommand("validate", "Check pre-treatment equality of two returns CSVs");
    validate->add_option("treatment", csv_a, "Treatment CSV")->required()->check(CLI::ExistingFile);
    validate->add_option("control", csv_b, "Control CSV")->required()->check(CLI::ExistingFile);
    validate->add_option("--at", validate_at, "Intervention episode T (1-based)")->required();
    validate->add_option("--tol", tol, "Tolerance (default 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, common, describe);
        if (*impact) return cmd_impact(treatment_path, control_path, at, config_path, tol, common);
        if (*forecast) return cmd_forecast(inputs, paths, noise_seed, common);
        if (*protocol) return cmd_protocol(config_path, common);
        if (*validate) return cmd_validate(csv_a, csv_b, validate_at, tol);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
