#include "pfolio/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "pfolio/error.hpp"

namespace pfolio {

namespace {

Json metrics_to_json(const PeriodMetrics& m) { return Json{{"vol", m.volatility}, {"sharpe", m.sharpe}}; }

PeriodMetrics metrics_from_json(const Json& j) {
    return {j.at("vol").get<double>(), j.at("sharpe").get<double>()};
}

Json counts_to_json(const WinnerCounts& c) {
    return Json{{"HRP", c.hrp}, {"EIGEN", c.eigen}, {"TIE", c.tie}};
}

Json node_to_json(const LinkageTree& tree, const std::vector<std::string>& tickers,
                  std::size_t id) {
    const std::size_t n = tree.leaf_count;
    if (id < n) return Json{{"id", id}, {"height", 0.0}, {"label", tickers.at(id)}};
    const auto& row = tree.rows[id - n];
    return Json{{"id", id},
                {"height", row.height},
                {"size", row.size},
                {"children",
                 Json::array({node_to_json(tree, tickers, row.left),
                              node_to_json(tree, tickers, row.right)})}};
}

std::string csv_number(double v) { return format_double(v); }

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

Json report_to_json(const BacktestReport& report) {
    Json methods = Json::object();
    for (const auto& [method, mr] : report.methods) {
        methods[std::string(to_string(method))] =
            Json{{"train", metrics_to_json(mr.train)}, {"test", metrics_to_json(mr.test)}};
    }
    const auto& md = report.metadata;
    Json meta{{"risk_free", md.risk_free},
              {"trading_days_per_year", md.trading_days},
              {"covariance", md.covariance},
              {"rebalancing", md.rebalancing},
              {"transaction_costs", md.transaction_costs},
              {"periods",
               {{"train", {{"start", md.train_start}, {"end", md.train_end}}},
                {"test", {{"start", md.test_start}, {"end", md.test_end}}}}},
              {"config_hash", md.config_hash}};
    for (const auto& [k, v] : md.extra) meta["extra"][k] = v;
    return Json{{"sector", report.sector}, {"methods", methods}, {"metadata", meta}};
}

BacktestReport report_from_json(const Json& j) {
    BacktestReport report;
    report.sector = j.at("sector").get<std::string>();
    for (const auto& [name, cells] : j.at("methods").items()) {
        const auto method = parse_method(name);
        if (!method) throw Error(ErrorCode::InvalidArgument, "unknown method " + name);
        MethodReport mr;
        mr.train = metrics_from_json(cells.at("train"));
        mr.test = metrics_from_json(cells.at("test"));
        report.methods.emplace(*method, std::move(mr));
    }
    if (j.contains("metadata")) {
        const auto& m = j.at("metadata");
        auto& md = report.metadata;
        md.risk_free = m.value("risk_free", 0.0);
        md.trading_days = m.value("trading_days_per_year", 250.0);
        md.covariance = m.value("covariance", md.covariance);
        md.rebalancing = m.value("rebalancing", md.rebalancing);
        md.transaction_costs = m.value("transaction_costs", 0.0);
        md.config_hash = m.value("config_hash", "");
        if (m.contains("periods")) {
            const auto& p = m.at("periods");
            md.train_start = p.at("train").at("start").get<std::string>();
            md.train_end = p.at("train").at("end").get<std::string>();
            md.test_start = p.at("test").at("start").get<std::string>();
            md.test_end = p.at("test").at("end").get<std::string>();
        }
        if (m.contains("extra")) {
            for (const auto& [k, v] : m.at("extra").items()) md.extra[k] = v.get<std::string>();
        }
    }
    return report;
}

Json summary_to_json(const ComparisonSummary& summary) {
    Json sectors = Json::array();
    for (const auto& s : summary.sectors) {
        sectors.push_back(
            {{"sector", s.sector}, {"winner_train", to_string(s.train)}, {"winner_test", to_string(s.test)}});
    }
    return Json{{"sectors", sectors},
                {"counts", {{"train", counts_to_json(summary.train)}, {"test", counts_to_json(summary.test)}}},
                {"criterion", "higher_sharpe"}};
}

Json dendrogram_to_json(const LinkageTree& tree, const std::vector<std::string>& tickers) {
    validate_tree(tree);
    if (tickers.size() != tree.leaf_count) {
        throw Error(ErrorCode::InvalidArgument, "ticker labels do not match the tree leaves");
    }
    Json rows = Json::array();
    for (const auto& r : tree.rows) rows.push_back(Json::array({r.left, r.right, r.height, r.size}));
    return Json{{"leaves", tickers},
                {"linkage", rows},
                {"root", node_to_json(tree, tickers, tree.leaf_count + tree.rows.size() - 1)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string report_to_csv(const BacktestReport& report) {
    std::ostringstream out;
    out << "sector,method,period,volatility,sharpe\n";
    for (const auto& [method, mr] : report.methods) {
        out << report.sector << ',' << to_string(method) << ",train," << csv_number(mr.train.volatility)
            << ',' << csv_number(mr.train.sharpe) << '\n';
        out << report.sector << ',' << to_string(method) << ",test," << csv_number(mr.test.volatility)
            << ',' << csv_number(mr.test.sharpe) << '\n';
    }
    return out.str();
}

std::string summary_to_csv(const ComparisonSummary& summary) {
    std::ostringstream out;
    out << "sector,winner_train,winner_test\n";
    for (const auto& s : summary.sectors) {
        out << s.sector << ',' << to_string(s.train) << ',' << to_string(s.test) << '\n';
    }
    return out.str();
}

std::string weights_to_csv(const PortfolioWeights& weights, const std::vector<std::size_t>& order) {
    std::ostringstream out;
    out << "ticker,weight\n";
    auto row = [&](std::size_t i) {
        out << weights.tickers[i] << ',' << csv_number(weights.weights[i]) << '\n';
    };
    if (order.empty()) {
        for (std::size_t i = 0; i < weights.tickers.size(); ++i) row(i);
    } else {
        for (auto i : order) row(i);
    }
    return out.str();
}

PortfolioWeights weights_from_csv(std::istream& in, Method method) {
    PortfolioWeights w;
    w.method = method;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            if (line != "ticker,weight") {
                throw Error(ErrorCode::MalformedCsv, "weights header must be 'ticker,weight'");
            }
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw Error(ErrorCode::MalformedCsv, "weights line " + std::to_string(line_no));
        }
        const std::string cell = line.substr(comma + 1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
            throw Error(ErrorCode::MalformedCsv, "weights line " + std::to_string(line_no) +
                                                     ": bad weight '" + cell + "'");
        }
        w.tickers.push_back(line.substr(0, comma));
        w.weights.push_back(value);
    }
    if (w.tickers.empty()) throw Error(ErrorCode::MalformedCsv, "weights file has no rows");
    return w;
}

std::string candidates_to_csv(const std::vector<EigenCandidate>& candidates,
                              const std::vector<std::string>& tickers) {
    std::ostringstream out;
    out << "rank,component,in_sample_sharpe";
    for (const auto& t : tickers) out << ',' << t;
    out << '\n';
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        const auto& c = candidates[r];
        out << r + 1 << ',' << c.component_index << ',' << csv_number(c.in_sample_sharpe);
        for (double w : c.weights) out << ',' << csv_number(w);
        out << '\n';
    }
    return out.str();
}

std::string series_to_csv(const BacktestReport& report, PeriodLabel period) {
    const bool train = period == PeriodLabel::Train;
    const auto& dates = train ? report.train_dates : report.test_dates;
    std::ostringstream out;
    out << "date";
    for (const auto& [method, mr] : report.methods) out << ',' << to_string(method);
    out << '\n';
    for (std::size_t t = 0; t < dates.size(); ++t) {
        out << format_date(dates[t]);
        for (const auto& [method, mr] : report.methods) {
            const auto& s = train ? mr.train_series : mr.test_series;
            out << ',' << csv_number(s.at(t));
        }
        out << '\n';
    }
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Io, "rename " + tmp.string() + ": " + ec.message());
}

}  // namespace pfolio
