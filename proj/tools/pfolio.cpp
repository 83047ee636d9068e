// pfolio: build HRP and eigen portfolios per sector and backtest them on
// disjoint train/test windows.
//
//   pfolio run      --config cfg.json [--jobs N] [--out DIR] [--format json|csv] [--sector NAME]
//   pfolio build    --config cfg.json ...            (weights only)
//   pfolio backtest --config cfg.json --weights DIR  (re-evaluate saved weights)
//   pfolio validate --config cfg.json
//
// Exit codes: 0 success, 1 partial failure, 2 config error.

#include <CLI11.hpp>
#include <iostream>
#include <spdlog/spdlog.h>

#include "pfolio/config.hpp"
#include "pfolio/pipeline.hpp"
#include "pfolio/report_io.hpp"

namespace {

constexpr int kExitConfigError = 2;

struct CommonOptions {
    std::string config;
    std::size_t jobs = 1;
    std::string out;
    std::string format = "json";
    std::string sector;
    std::string weights;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--jobs", opts.jobs, "Sectors processed concurrently")->check(CLI::PositiveNumber);
    cmd->add_option("--out", opts.out, "Output directory (overrides config and PFOLIO_OUT_DIR)");
    cmd->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--sector", opts.sector, "Only process this sector");
    cmd->add_flag("--quiet", opts.quiet, "Only log warnings and errors");
}

void print_config_errors(const pfolio::ConfigResult& result) {
    pfolio::Json j{{"errors", result.errors}, {"warnings", result.warnings}};
    std::cerr << pfolio::dump(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HRP and eigen portfolio construction and backtesting"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto* run = app.add_subcommand("run", "Build portfolios, backtest them, write reports");
    auto* build = app.add_subcommand("build", "Build portfolios and write weights only");
    auto* backtest = app.add_subcommand("backtest", "Backtest weights saved by a previous build");
    auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults");
    for (auto* cmd : {run, build, backtest}) add_common(cmd, opts);
    backtest->add_option("--weights", opts.weights,
                         "Directory holding <sector>/weights_{hrp,eigen}.csv (default: output dir)");
    validate->add_option("--config", opts.config, "Experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);
    if (opts.quiet) spdlog::set_level(spdlog::level::warn);

    auto result = pfolio::load_config(opts.config);
    if (!result.ok()) {
        print_config_errors(result);
        return kExitConfigError;
    }
    for (const auto& w : result.warnings) spdlog::warn("{}", w);

    auto config = *result.config;
    if (const auto env_errors = pfolio::apply_env_overrides(config); !env_errors.empty()) {
        result.errors = env_errors;
        print_config_errors(result);
        return kExitConfigError;
    }
    if (!opts.out.empty()) config.output_dir = opts.out;

    if (*validate) {
        pfolio::Json j{{"config", config.to_json()},
                       {"applied_defaults", config.applied_defaults},
                       {"warnings", result.warnings},
                       {"config_hash", config.hash()}};
        std::cout << pfolio::dump(j);
        return 0;
    }

    pfolio::RunOptions run_opts;
    run_opts.mode = *build ? pfolio::RunMode::Build
                  : *backtest ? pfolio::RunMode::Backtest
                              : pfolio::RunMode::Run;
    run_opts.jobs = opts.jobs;
    run_opts.format = opts.format == "csv" ? pfolio::ReportFormat::Csv : pfolio::ReportFormat::Json;
    if (!opts.sector.empty()) run_opts.sector_filter = opts.sector;
    if (!opts.weights.empty()) run_opts.weights_dir = opts.weights;

    pfolio::RunOutcome outcome;
    try {
        outcome = pfolio::run_experiment(config, run_opts);
    } catch (const std::exception& e) {
        // Only whole-run failures (e.g. unwritable output dir) land here.
        std::cerr << pfolio::dump(pfolio::Json{{"errors", {{{"stage", "output"}, {"cause", e.what()}}}}});
        return 1;
    }
    if (!outcome.errors.empty()) {
        pfolio::Json errors = pfolio::Json::array();
        for (const auto& e : outcome.errors) {
            errors.push_back({{"file", e.file}, {"sector", e.sector}, {"stage", e.stage}, {"cause", e.cause}});
        }
        std::cerr << pfolio::dump(pfolio::Json{{"errors", errors}});
    }
    spdlog::info("{} sector(s) completed, {} failed; outputs in {}", outcome.completed_sectors.size(),
                 outcome.errors.size(), config.output_dir.string());
    return outcome.exit_code();
}
