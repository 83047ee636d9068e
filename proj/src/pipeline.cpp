#include "pfolio/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "pfolio/error.hpp"
#include "pfolio/report_io.hpp"

namespace pfolio {

namespace {

namespace fs = std::filesystem;

/// Remembers which file and stage a sector was in when something threw.
struct Progress {
    std::string stage = "load";
    std::string file;
};

PricePanel load_panel_tracked(const SectorSpec& sector, const ExperimentConfig& config,
                              Progress& progress) {
    std::vector<PriceSeries> series;
    if (sector.wide_csv) {
        progress.file = sector.wide_csv->string();
        auto columns = load_wide_csv(*sector.wide_csv, config.missing_close);
        for (const auto& ticker : sector.tickers) {
            auto it = std::find_if(columns.begin(), columns.end(),
                                   [&](const PriceSeries& s) { return s.ticker == ticker; });
            if (it == columns.end()) {
                throw Error(ErrorCode::TickerMismatch, ticker + " is not a column of the wide CSV");
            }
            series.push_back(std::move(*it));
        }
    } else {
        for (const auto& ticker : sector.tickers) {
            const fs::path path = *sector.data_dir / (ticker + ".csv");
            progress.file = path.string();
            series.push_back(load_price_csv(path, ticker, config.missing_close));
        }
    }
    progress.file.clear();
    progress.stage = "align";
    return align_panel(series, config.alignment);
}

Json weights_to_json(const PortfolioWeights& w) {
    Json weights = Json::object();
    for (std::size_t i = 0; i < w.tickers.size(); ++i) weights[w.tickers[i]] = w.weights[i];
    return Json{{"method", to_string(w.method)},
                {"tickers", w.tickers},
                {"weights", weights},
                {"built_on", w.built_on ? format_date(*w.built_on) : std::string()},
                {"metadata", w.metadata}};
}

Json pca_to_json(const PortfolioBuild& build) {
    const auto& m = build.pca;
    return Json{{"tickers", m.tickers},
                {"standardized", m.standardized},
                {"eigenvalues", std::vector<double>(m.eigenvalues.begin(), m.eigenvalues.end())},
                {"explained_ratio",
                 std::vector<double>(m.explained_ratio.begin(), m.explained_ratio.end())},
                {"components_retained", build.components},
                {"skipped_candidates", build.eigen.skipped}};
}

PortfolioWeights read_weights(const fs::path& path, Method method, Progress& progress) {
    progress.file = path.string();
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    auto w = weights_from_csv(in, method);
    progress.file.clear();
    return w;
}

struct SectorResult {
    std::optional<BacktestReport> report;
    std::optional<StageError> error;
};

SectorResult process_sector(const SectorSpec& sector, const ExperimentConfig& config,
                            const RunOptions& options) {
    const fs::path dir = config.output_dir / sector.name;
    Progress progress;
    SectorResult result;
    try {
        const PricePanel panel = load_panel_tracked(sector, config, progress);

        progress.stage = "slice";
        const PricePanel train = slice_period(panel, config.train);
        const PricePanel test = slice_period(panel, config.test);

        std::vector<PortfolioWeights> portfolios;
        std::map<std::string, std::string> extra{
            {"alignment", config.alignment == AlignmentPolicy::Intersection ? "intersection"
                                                                            : "forward_fill"},
            {"hrp.distance", std::string(to_string(config.hrp.distance))},
            {"hrp.linkage", std::string(to_string(config.hrp.linkage))},
            {"eigen.standardize", config.eigen.standardize ? "true" : "false"},
            {"eigen.variance_threshold", format_double(config.eigen.variance_threshold)},
        };

        if (options.mode == RunMode::Backtest) {
            progress.stage = "load_weights";
            const fs::path wdir = options.weights_dir.value_or(config.output_dir) / sector.name;
            portfolios.push_back(read_weights(wdir / "weights_eigen.csv", Method::Eigen, progress));
            portfolios.push_back(read_weights(wdir / "weights_hrp.csv", Method::Hrp, progress));
            extra["weights_source"] = "file";
        } else {
            progress.stage = "build";
            const PortfolioBuild build = build_portfolios(train, config);

            progress.stage = "write";
            atomic_write(dir / "weights_hrp.csv", weights_to_csv(build.hrp.weights, build.hrp.order.order));
            atomic_write(dir / "weights_eigen.csv", weights_to_csv(build.eigen.best));
            atomic_write(dir / "portfolio.json",
                         dump(Json{{"HRP", weights_to_json(build.hrp.weights)},
                                   {"EIGEN", weights_to_json(build.eigen.best)}}));
            atomic_write(dir / "dendrogram.json", dump(dendrogram_to_json(build.hrp.tree, train.tickers)));
            atomic_write(dir / "candidates.csv", candidates_to_csv(build.eigen.candidates, train.tickers));
            atomic_write(dir / "pca.json", dump(pca_to_json(build)));

            portfolios.push_back(build.eigen.best);
            portfolios.push_back(build.hrp.weights);
            extra["weights_source"] = "built";
            extra["eigen.component_index"] = build.eigen.best.metadata.at("component_index");
            extra["eigen.components_retained"] = std::to_string(build.components);
        }

        if (options.mode != RunMode::Build) {
            progress.stage = "backtest";
            BacktestReport report = evaluate(sector.name, portfolios, train, test, config.risk_free);
            report.metadata.config_hash = config.hash();
            report.metadata.extra = std::move(extra);

            progress.stage = "write";
            if (options.format == ReportFormat::Json) {
                atomic_write(dir / "report.json", dump(report_to_json(report)));
            } else {
                atomic_write(dir / "report.csv", report_to_csv(report));
            }
            atomic_write(dir / "returns_train.csv", series_to_csv(report, PeriodLabel::Train));
            atomic_write(dir / "returns_test.csv", series_to_csv(report, PeriodLabel::Test));
            result.report = std::move(report);
        }
        spdlog::info("sector {} done", sector.name);
    } catch (const std::exception& e) {
        spdlog::error("sector {} failed at {}: {}", sector.name, progress.stage, e.what());
        result.error = StageError{progress.file, sector.name, progress.stage, e.what()};
    }
    return result;
}

}  // namespace

PricePanel load_sector_panel(const SectorSpec& sector, const ExperimentConfig& config) {
    Progress progress;
    return load_panel_tracked(sector, config, progress);
}

PortfolioBuild build_portfolios(const PricePanel& train_panel, const ExperimentConfig& config) {
    const ReturnsMatrix returns = daily_returns(train_panel);
    PortfolioBuild build;
    build.hrp = build_hrp_portfolio(returns, config.hrp);
    build.pca = fit_pca(returns, config.eigen.standardize);
    build.components = min_components_for_variance(build.pca, config.eigen.variance_threshold);
    build.eigen = select_best_eigen(returns, build.pca, build.components, config.risk_free);
    return build;
}

RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    std::vector<const SectorSpec*> selected;
    for (const auto& s : config.sectors) {
        if (!options.sector_filter || *options.sector_filter == s.name) selected.push_back(&s);
    }

    RunOutcome outcome;
    if (selected.empty()) {
        outcome.errors.push_back({"", options.sector_filter.value_or(""), "select",
                                  "no sector matches the filter"});
    }

    std::vector<SectorResult> results(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++) {
            results[i] = process_sector(*selected[i], config, options);
        }
    };
    {
        const std::size_t threads = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(selected.size(), 1));
        std::vector<std::jthread> pool;
        for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
        worker();
    }

    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (results[i].error) {
            outcome.errors.push_back(*results[i].error);
            continue;
        }
        outcome.completed_sectors.push_back(selected[i]->name);
        if (results[i].report) outcome.reports.push_back(std::move(*results[i].report));
    }

    if (options.mode != RunMode::Build && !outcome.reports.empty()) {
        const ComparisonSummary summary = summarize(outcome.reports);
        if (options.format == ReportFormat::Json) {
            Json j = summary_to_json(summary);
            j["config_hash"] = config.hash();
            atomic_write(config.output_dir / "summary.json", dump(j));
        } else {
            atomic_write(config.output_dir / "summary.csv", summary_to_csv(summary));
        }
    }

    Json errors = Json::array();
    for (const auto& e : outcome.errors) {
        errors.push_back({{"file", e.file}, {"sector", e.sector}, {"stage", e.stage}, {"cause", e.cause}});
    }
    atomic_write(config.output_dir / "errors.json", dump(Json{{"errors", errors}}));
    return outcome;
}

}  // namespace pfolio
