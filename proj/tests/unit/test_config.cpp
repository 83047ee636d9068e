#include <gtest/gtest.h>

#include <cstdlib>

#include "pfolio/config.hpp"
#include "helpers.hpp"

using namespace pfolio;

namespace {

const char* kMinimal = R"({
  "sectors": [{"name": "auto", "tickers": ["A", "B"], "data_dir": "data/auto"}]
})";

bool has(const std::vector<std::string>& v, std::string_view needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Config, DefaultsAreAppliedAndReported) {
    const auto r = validate_config(kMinimal, "/base");
    ASSERT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
    const auto& c = *r.config;
    EXPECT_EQ(c.train.start, make_date(2016, 1, 1));
    EXPECT_EQ(c.train.end, make_date(2020, 12, 31));
    EXPECT_EQ(c.test.start, make_date(2021, 1, 1));
    EXPECT_EQ(c.test.end, make_date(2021, 11, 1));
    EXPECT_EQ(c.risk_free, 0.0);
    EXPECT_EQ(c.hrp.linkage, LinkageMethod::Ward);
    EXPECT_EQ(c.hrp.distance, DistanceMode::SqrtHalf);
    EXPECT_TRUE(c.eigen.standardize);
    EXPECT_EQ(c.eigen.variance_threshold, 0.8);
    EXPECT_EQ(c.sectors[0].data_dir, std::filesystem::path("/base/data/auto"));
    EXPECT_TRUE(has(c.applied_defaults, "risk_free=0"));
    EXPECT_TRUE(has(c.applied_defaults, "eigen.variance_threshold=0.8"));
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Config, ThresholdOutOfRangeIsAnError) {
    const auto r = validate_config(R"({
      "sectors": [{"name": "a", "tickers": ["A", "B"], "data_dir": "d"}],
      "eigen": {"variance_threshold": 1.5}
    })", ".");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has(r.errors, "variance_threshold"));
}

TEST(Config, UnknownKeysWarn) {
    const auto r = validate_config(R"({
      "sectors": [{"name": "a", "tickers": ["A", "B"], "data_dir": "d", "colour": 1}],
      "rebalance": "monthly"
    })", ".");
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(has(r.warnings, "rebalance"));
    EXPECT_TRUE(has(r.warnings, "colour"));
}

TEST(Config, CollectsAllErrors) {
    const auto r = validate_config(R"({
      "sectors": [{"name": "a/b", "tickers": ["A"], "data_dir": "d", "wide_csv": "w.csv"}],
      "risk_free": "high",
      "hrp": {"linkage": "centroid"},
      "train": {"start": "2020-01-01", "end": "2019-01-01"}
    })", ".");
    EXPECT_FALSE(r.ok());
    EXPECT_GE(r.errors.size(), 5u);
    EXPECT_TRUE(has(r.errors, "path separators"));
    EXPECT_TRUE(has(r.errors, "at least 2"));
    EXPECT_TRUE(has(r.errors, "exactly one"));
    EXPECT_TRUE(has(r.errors, "risk_free"));
    EXPECT_TRUE(has(r.errors, "hrp.linkage"));
}

TEST(Config, OverlappingPeriodsAreRejected) {
    const auto r = validate_config(R"({
      "sectors": [{"name": "a", "tickers": ["A", "B"], "data_dir": "d"}],
      "train": {"start": "2016-01-01", "end": "2021-03-01"}
    })", ".");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has(r.errors, "overlap"));
}

TEST(Config, InvalidJson) {
    const auto r = validate_config("{not json", ".");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has(r.errors, "JSON"));
}

TEST(Config, HashIgnoresPathsButNotParameters) {
    auto a = *validate_config(kMinimal, "/one").config;
    auto b = *validate_config(kMinimal, "/two").config;
    b.output_dir = "elsewhere";
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    b.risk_free = 0.01;
    EXPECT_NE(a.hash(), b.hash());
}

TEST(Config, NormalizedJsonReparses) {
    const auto a = *validate_config(kMinimal, "/base").config;
    const auto again = validate_config(a.to_json().dump(), "/elsewhere");
    ASSERT_TRUE(again.ok());
    EXPECT_EQ(again.config->hash(), a.hash());
    EXPECT_TRUE(again.config->applied_defaults.empty());
}

TEST(Config, EnvironmentOverrides) {
    auto c = *validate_config(kMinimal, ".").config;
    ::setenv("PFOLIO_RISK_FREE", "0.05", 1);
    ::setenv("PFOLIO_OUT_DIR", "/tmp/pf_env_out", 1);
    EXPECT_TRUE(apply_env_overrides(c).empty());
    EXPECT_EQ(c.risk_free, 0.05);
    EXPECT_EQ(c.output_dir, std::filesystem::path("/tmp/pf_env_out"));
    ::setenv("PFOLIO_RISK_FREE", "lots", 1);
    EXPECT_EQ(apply_env_overrides(c).size(), 1u);
    ::unsetenv("PFOLIO_RISK_FREE");
    ::unsetenv("PFOLIO_OUT_DIR");
}

TEST(Config, LoadResolvesRelativeToFile) {
    const auto dir = testing_util::scratch_dir("config_load");
    atomic_write(dir / "cfg.json", kMinimal);
    const auto r = load_config(dir / "cfg.json");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r.config->sectors[0].data_dir, dir / "data/auto");
    EXPECT_FALSE(load_config(dir / "missing.json").ok());
}
