#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "pfolio/error.hpp"
#include "pfolio/returns_stats.hpp"

namespace testing_util {

template <class F>
pfolio::ErrorCode code_of(F&& fn) {
    try {
        fn();
    } catch (const pfolio::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no pfolio::Error thrown";
    return pfolio::ErrorCode::Io;
}

inline pfolio::ReturnsMatrix returns_of(const Eigen::MatrixXd& values) {
    pfolio::ReturnsMatrix r;
    r.values = values;
    for (Eigen::Index i = 0; i < values.cols(); ++i) r.tickers.push_back("A" + std::to_string(i));
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
        r.dates.push_back(pfolio::make_date(2016, 1, 1) + std::chrono::days{t});
    }
    return r;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                                     double scale = 0.01) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index t = 0; t < rows; ++t)
        for (Eigen::Index i = 0; i < cols; ++i) m(t, i) = g(rng);
    return m;
}

inline pfolio::CovarianceMatrix cov_of(const Eigen::MatrixXd& values) {
    pfolio::CovarianceMatrix c;
    c.values = values;
    for (Eigen::Index i = 0; i < values.cols(); ++i) c.tickers.push_back("A" + std::to_string(i));
    return c;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("pfolio_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_util
