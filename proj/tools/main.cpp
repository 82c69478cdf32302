// cocrash: co-jump detection and systemic crash analysis on minute panels.
//
// Subcommands run the full chain (`analyze`) or one cached stage at a time
// (`ingest`, `detect`, `cojump`, `rank`, `null`, `liquidity`); `simulate`
// produces a synthetic panel with ground truth, `report` verifies a finished
// output directory.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cocrash/csv.hpp"
#include "cocrash/pipeline.hpp"

namespace {

using namespace cocrash;

int stage_exit_code(const std::string& stage) {
    if (stage == "ingest") return 10;
    if (stage == "detect") return 11;
    if (stage == "cojump") return 12;
    if (stage == "rank") return 13;
    if (stage == "null") return 14;
    if (stage == "liquidity") return 15;
    if (stage == "simulate") return 16;
    if (stage == "report") return 17;
    return 1;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> output;
    std::optional<std::int64_t> seed;
    std::optional<int> threads;
    std::optional<double> alpha;
    std::optional<std::string> direction;
    std::optional<std::string> input;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "run config file (key = value)");
    if (config_required) opt->required();
    cmd->add_option("--input", flags.input, "input CSV file or directory (overrides config)");
    cmd->add_option("--output", flags.output, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "master seed (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker cap, 0 = all cores (overrides config)");
    cmd->add_option("--alpha", flags.alpha, "detector significance level (overrides config)");
    cmd->add_option("--direction", flags.direction, "jump pooling: both|down|up (overrides config)");
}

RunConfig make_run_config(const CommonFlags& flags) {
    KeyValueConfig cfg = flags.config_path.empty() ? KeyValueConfig()
                                                   : KeyValueConfig::load(flags.config_path);
    if (flags.input) cfg.set("input", *flags.input);
    if (flags.output) cfg.set("output", *flags.output);
    if (flags.seed) cfg.set("seed", std::to_string(*flags.seed));
    if (flags.threads) cfg.set("threads", std::to_string(*flags.threads));
    if (flags.alpha) cfg.set("alpha", format_double(*flags.alpha));
    if (flags.direction) cfg.set("direction", *flags.direction);
    if (const char* env = std::getenv("COCRASH_OUTPUT_DIR"); env && *env)
        cfg.set("output", env);
    return RunConfig::from_config(cfg);
}

int run_stage(const std::string& name, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const StageFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return stage_exit_code(e.stage);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: stage " << name << ": " << e.what() << '\n';
        return stage_exit_code(name);
    }
}

PricePanel load_panel(const RunConfig& config, const std::string& path) {
    return align(ingest_csv(path, config.calendar()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-jump detection and systemic crash analysis"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string plan_path;
    std::string report_dir;

    auto* analyze = app.add_subcommand("analyze", "run the full pipeline");
    add_common_flags(analyze, flags, false);
    auto* ingest = app.add_subcommand("ingest", "build and snapshot the aligned panel");
    add_common_flags(ingest, flags, false);
    auto* detect = app.add_subcommand("detect", "detect per-asset jumps on a cached panel");
    add_common_flags(detect, flags, false);
    auto* cojump = app.add_subcommand("cojump", "group cached jump events into co-crashes");
    add_common_flags(cojump, flags, false);
    auto* rank = app.add_subcommand("rank", "rank-correlation analysis of a cached table");
    add_common_flags(rank, flags, false);
    auto* null_cmd = app.add_subcommand("null", "null-model significance of a cached table");
    add_common_flags(null_cmd, flags, false);
    auto* liquidity = app.add_subcommand("liquidity", "volume/crash analyses of cached outputs");
    add_common_flags(liquidity, flags, false);

    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic panel from a plan");
    simulate_cmd->add_option("--plan", plan_path, "simulation plan file")->required();
    add_common_flags(simulate_cmd, flags, false);

    auto* report = app.add_subcommand("report", "verify artifacts and write report.txt");
    report->add_option("--output", report_dir, "finished output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed())
        return run_stage("ingest", [&] { run_pipeline(make_run_config(flags)); });

    if (ingest->parsed())
        return run_stage("ingest", [&] {
            const RunConfig config = make_run_config(flags);
            if (config.input_path.empty()) throw ConfigError("config key 'input' is required");
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const PricePanel panel = load_panel(config, config.input_path);
                write_panel_snapshot(panel, dir + "/" + artifact::kPanelSnapshot,
                                     config.meta_comment());
                write_universe_csv(panel.assets(), dir + "/" + artifact::kUniverse,
                                   config.meta_comment());
            });
        });

    if (detect->parsed())
        return run_stage("detect", [&] {
            const RunConfig config = make_run_config(flags);
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const PricePanel panel =
                    load_panel(config, config.output_dir + "/" + artifact::kPanelSnapshot);
                const DetectOutput out =
                    detect_panel(panel, config.calendar(), config.detector, config.threads);
                write_events_csv(out.events, dir + "/" + artifact::kEvents,
                                 config.meta_comment());
            });
        });

    if (cojump->parsed())
        return run_stage("cojump", [&] {
            const RunConfig config = make_run_config(flags);
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const auto events =
                    load_events_csv(config.output_dir + "/" + artifact::kEvents);
                const auto universe =
                    load_universe_csv(config.output_dir + "/" + artifact::kUniverse);
                const auto filtered = filter_direction(events, config.direction);
                const auto cocrashes = group_events(filtered);
                const auto table = build_frequency_table(cocrashes, universe);
                write_cojump_outputs(cocrashes, table, config.meta_comment(), dir);
            });
        });

    if (rank->parsed())
        return run_stage("rank", [&] {
            const RunConfig config = make_run_config(flags);
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const auto universe =
                    load_universe_csv(config.output_dir + "/" + artifact::kUniverse);
                const auto table = load_crash_frequency_csv(
                    config.output_dir + "/" + artifact::kCrashFrequency, universe);
                write_rank_outputs(correlation_curves(table), config, dir);
            });
        });

    if (null_cmd->parsed())
        return run_stage("null", [&] {
            const RunConfig config = make_run_config(flags);
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const auto universe =
                    load_universe_csv(config.output_dir + "/" + artifact::kUniverse);
                const auto table = load_crash_frequency_csv(
                    config.output_dir + "/" + artifact::kCrashFrequency, universe);
                const auto curves = correlation_curves(table);
                write_significance_outputs(compute_significance(table, curves, config), config,
                                           dir);
            });
        });

    if (liquidity->parsed())
        return run_stage("liquidity", [&] {
            const RunConfig config = make_run_config(flags);
            with_quarantine(config.output_dir, [&](const std::string& dir) {
                const PricePanel panel =
                    load_panel(config, config.output_dir + "/" + artifact::kPanelSnapshot);
                const auto universe =
                    load_universe_csv(config.output_dir + "/" + artifact::kUniverse);
                const auto table = load_crash_frequency_csv(
                    config.output_dir + "/" + artifact::kCrashFrequency, universe);
                const auto cocrashes =
                    load_cocrash_events_csv(config.output_dir + "/" + artifact::kCoCrashEvents);
                write_liquidity_outputs(panel, cocrashes, table, config, dir);
            });
        });

    if (simulate_cmd->parsed())
        return run_stage("simulate", [&] {
            SimulationPlan plan = SimulationPlan::from_config(KeyValueConfig::load(plan_path));
            if (flags.seed) plan.seed = static_cast<std::uint64_t>(*flags.seed);
            std::string out_dir = flags.output.value_or("out_sim");
            if (const char* env = std::getenv("COCRASH_OUTPUT_DIR"); env && *env) out_dir = env;
            run_simulate(plan, out_dir, flags.threads.value_or(0));
        });

    if (report->parsed()) return run_stage("report", [&] { run_report(report_dir); });

    return 1;
}
