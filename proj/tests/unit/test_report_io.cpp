#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pfolio/report_io.hpp"
#include "helpers.hpp"
#include "tables.hpp"

using namespace pfolio;
using testing_util::code_of;

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(ReportJson, RoundTripIsBitExact) {
    for (const auto& row : tables::kRows) {
        auto report = tables::report_of(row);
        report.metadata.config_hash = "abc";
        report.metadata.extra["hrp.linkage"] = "ward";
        const std::string text = dump(report_to_json(report));
        const auto back = report_from_json(Json::parse(text));
        EXPECT_EQ(back.sector, report.sector);
        EXPECT_EQ(back.metadata, report.metadata);
        for (auto m : {Method::Eigen, Method::Hrp}) {
            EXPECT_EQ(back.methods.at(m).train, report.methods.at(m).train);
            EXPECT_EQ(back.methods.at(m).test, report.methods.at(m).test);
        }
        EXPECT_EQ(dump(report_to_json(back)), text);
    }
}

TEST(ReportJson, Shape) {
    const auto j = report_to_json(tables::report_of(tables::kRows[0]));
    EXPECT_EQ(j["sector"], "auto");
    EXPECT_EQ(j["methods"]["EIGEN"]["train"]["vol"].get<double>(), 0.240137);
    EXPECT_EQ(j["methods"]["HRP"]["test"]["sharpe"].get<double>(), 1.204434);
    EXPECT_TRUE(j["metadata"].contains("risk_free"));
    EXPECT_TRUE(j["metadata"].contains("trading_days_per_year"));
}

TEST(ReportJson, RejectsGarbage) {
    EXPECT_ANY_THROW(report_from_json(Json::parse(R"({"sector": 3})")));
}

TEST(SummaryJson, CountsAndWinners) {
    const auto reports = tables::all_reports();
    const auto j = summary_to_json(summarize(reports));
    EXPECT_EQ(j["counts"]["train"]["HRP"], 4);
    EXPECT_EQ(j["counts"]["test"]["HRP"], 5);
    EXPECT_EQ(j["sectors"][0]["winner_test"], "EIGEN");
    EXPECT_EQ(summary_to_csv(summarize(reports)).substr(0, 45),
              "sector,winner_train,winner_test\nauto,HRP,EIGE");
}

TEST(WeightsCsv, RoundTripInGivenOrder) {
    PortfolioWeights w{{"A", "B", "C"}, {0.1 + 0.2, 1.0 / 3.0, 0.3666666666666667}, Method::Hrp, {}, {}};
    const auto text = weights_to_csv(w, {2, 0, 1});
    EXPECT_EQ(text.substr(0, 16), "ticker,weight\nC,");
    std::istringstream in(text);
    const auto back = weights_from_csv(in, Method::Hrp);
    EXPECT_EQ(back.tickers, (std::vector<std::string>{"C", "A", "B"}));
    EXPECT_EQ(back.weight_of("A"), w.weights[0]);
    EXPECT_EQ(back.weight_of("B"), w.weights[1]);
}

TEST(WeightsCsv, Malformed) {
    std::istringstream bad_header("asset,w\nA,1\n");
    EXPECT_EQ(code_of([&] { weights_from_csv(bad_header, Method::Hrp); }), ErrorCode::MalformedCsv);
    std::istringstream bad_value("ticker,weight\nA,x\n");
    EXPECT_EQ(code_of([&] { weights_from_csv(bad_value, Method::Hrp); }), ErrorCode::MalformedCsv);
    std::istringstream empty("ticker,weight\n");
    EXPECT_EQ(code_of([&] { weights_from_csv(empty, Method::Hrp); }), ErrorCode::MalformedCsv);
}

TEST(Dendrogram, NestedTree) {
    const LinkageTree tree{3, {{0, 2, 1.0, 2}, {1, 3, 5.196152422706632, 3}}};
    const auto j = dendrogram_to_json(tree, {"X", "Y", "Z"});
    EXPECT_EQ(j["root"]["id"], 4);
    EXPECT_EQ(j["root"]["size"], 3);
    EXPECT_EQ(j["root"]["children"][0]["label"], "Y");
    EXPECT_EQ(j["root"]["children"][1]["children"][1]["label"], "Z");
    EXPECT_EQ(j["linkage"].size(), 2u);
    EXPECT_EQ(code_of([&] { dendrogram_to_json(tree, {"X"}); }), ErrorCode::InvalidArgument);
}

TEST(SeriesCsv, HeaderAndRows) {
    auto r = tables::report_of(tables::kRows[1]);
    r.test_dates = {make_date(2021, 1, 4), make_date(2021, 1, 5)};
    r.methods[Method::Eigen].test_series = {0.01, -0.02};
    r.methods[Method::Hrp].test_series = {0.5, 0.25};
    EXPECT_EQ(series_to_csv(r, PeriodLabel::Test),
              "date,EIGEN,HRP\n2021-01-04,0.01,0.5\n2021-01-05,-0.02,0.25\n");
}

TEST(ReportCsv, OneRowPerMethodAndPeriod) {
    const auto csv = report_to_csv(tables::report_of(tables::kRows[0]));
    EXPECT_NE(csv.find("auto,HRP,test,0.207317,1.204434\n"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(AtomicWrite, CreatesParentsAndReplaces) {
    const auto dir = testing_util::scratch_dir("atomic");
    const auto path = dir / "a" / "b.txt";
    atomic_write(path, "one");
    atomic_write(path, "two");
    EXPECT_EQ(testing_util::slurp(path), "two");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}
