#pragma once

// Published per-sector results used as fixed inputs for the summary and
// serialization tests.

#include <array>
#include <string>
#include <vector>

#include "pfolio/backtest.hpp"

namespace tables {

struct Row {
    const char* sector;
    double eigen_train_vol, eigen_train_sharpe;
    double hrp_train_vol, hrp_train_sharpe;
    double eigen_test_vol, eigen_test_sharpe;
    double hrp_test_vol, hrp_test_sharpe;
};

inline constexpr std::array<Row, 7> kRows{{
    {"auto", 0.240137, 0.500069, 0.226378, 0.620970, 0.225286, 1.479449, 0.207317, 1.204434},
    {"consumer_durables", 0.205992, 1.253044, 0.184684, 1.205891, 0.172882, 2.731261, 0.151220, 3.019343},
    {"financial_services", 0.262314, 0.973574, 0.242130, 1.024041, 0.236104, 1.908093, 0.225178, 1.637399},
    {"healthcare", 0.223730, 0.799622, 0.193036, 1.054018, 0.184003, 0.672148, 0.169768, 1.410061},
    {"it", 0.214254, 1.44903, 0.206345, 1.43674, 0.234554, 2.839298, 0.227796, 2.910402},
    {"oil_gas", 0.236194, 0.590050, 0.213704, 0.832144, 0.203017, 1.723656, 0.193843, 1.848685},
    {"nifty50", 0.184898, 0.934880, 0.187925, 0.887088, 0.153761, 2.480044, 0.163927, 2.799373},
}};

inline pfolio::BacktestReport report_of(const Row& row) {
    pfolio::BacktestReport r;
    r.sector = row.sector;
    r.methods[pfolio::Method::Eigen].train = {row.eigen_train_vol, row.eigen_train_sharpe};
    r.methods[pfolio::Method::Eigen].test = {row.eigen_test_vol, row.eigen_test_sharpe};
    r.methods[pfolio::Method::Hrp].train = {row.hrp_train_vol, row.hrp_train_sharpe};
    r.methods[pfolio::Method::Hrp].test = {row.hrp_test_vol, row.hrp_test_sharpe};
    r.metadata.train_start = "2016-01-01";
    r.metadata.train_end = "2020-12-31";
    r.metadata.test_start = "2021-01-01";
    r.metadata.test_end = "2021-11-01";
    return r;
}

inline std::vector<pfolio::BacktestReport> all_reports() {
    std::vector<pfolio::BacktestReport> out;
    for (const auto& row : kRows) out.push_back(report_of(row));
    return out;
}

}  // namespace tables
