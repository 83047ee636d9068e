#include "pfolio/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <cctype>

#include "pfolio/error.hpp"
#include "pfolio/report_io.hpp"

namespace pfolio::synthetic {

namespace {

const char* const kSectorNames[] = {"auto",       "consumer_durables", "financial_services",
                                    "healthcare", "it",                "oil_gas",
                                    "nifty50"};

std::string sector_name(std::size_t i) {
    if (i < std::size(kSectorNames)) return kSectorNames[i];
    return "sector" + std::to_string(i + 1);
}

std::string ticker_name(const std::string& sector, std::size_t i) {
    std::string prefix;
    for (char c : sector) {
        if (std::isalnum(static_cast<unsigned char>(c))) prefix += static_cast<char>(std::toupper(c));
        if (prefix.size() == 4) break;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%02zu", i + 1);
    return prefix + buf;
}

}  // namespace

double Gaussian::uniform() {
    double u = 0.0;
    while (u == 0.0) u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return u;
}

double Gaussian::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<Date> business_days(Date start, Date end) {
    std::vector<Date> out;
    for (Date d = start; d <= end; d += std::chrono::days{1}) {
        const std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(d);
    }
    return out;
}

std::vector<PriceSeries> sector_prices(const SectorSpec& spec) {
    if (spec.assets == 0 || spec.clusters == 0) {
        throw Error(ErrorCode::InvalidArgument, "synthetic sector needs assets and clusters");
    }
    Gaussian g(spec.seed);
    const auto dates = business_days(spec.start, spec.end);

    std::vector<double> beta(spec.assets), price(spec.assets), idio_vol(spec.assets);
    std::vector<PriceSeries> out(spec.assets);
    for (std::size_t i = 0; i < spec.assets; ++i) {
        beta[i] = 0.7 + 0.6 * g.uniform();
        idio_vol[i] = 0.008 + 0.010 * g.uniform();
        price[i] = 50.0 + 950.0 * g.uniform();
        out[i].ticker = ticker_name(spec.name, i);
        out[i].observations.reserve(dates.size());
    }
    std::vector<double> cluster_shock(spec.clusters);
    for (std::size_t t = 0; t < dates.size(); ++t) {
        if (t > 0) {
            const double market = 0.0004 + 0.009 * g.next();
            for (auto& c : cluster_shock) c = 0.007 * g.next();
            for (std::size_t i = 0; i < spec.assets; ++i) {
                double r = beta[i] * market + cluster_shock[i % spec.clusters] + idio_vol[i] * g.next();
                r = std::max(r, -0.5);
                price[i] *= 1.0 + r;
            }
        }
        for (std::size_t i = 0; i < spec.assets; ++i) {
            // Quote to 1e-4 like an exchange would; keeps fixture files small.
            const double quoted = std::max(std::round(price[i] * 1e4) / 1e4, 1e-4);
            out[i].observations.push_back({dates[t], quoted});
        }
    }
    return out;
}

ReturnsMatrix block_returns(std::size_t rows, const std::vector<std::size_t>& block_of,
                            double within_rho, double daily_vol, std::uint64_t seed) {
    Gaussian g(seed);
    std::size_t blocks = 0;
    for (auto b : block_of) blocks = std::max(blocks, b + 1);
    const double common = std::sqrt(within_rho), own = std::sqrt(1.0 - within_rho);

    ReturnsMatrix out;
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(block_of.size()));
    std::vector<double> factor(blocks);
    for (std::size_t t = 0; t < rows; ++t) {
        for (auto& f : factor) f = g.next();
        for (std::size_t i = 0; i < block_of.size(); ++i) {
            out.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
                daily_vol * (common * factor[block_of[i]] + own * g.next());
        }
    }
    for (std::size_t i = 0; i < block_of.size(); ++i) out.tickers.push_back("A" + std::to_string(i));
    const auto days = business_days(make_date(2000, 1, 3), make_date(2100, 1, 1));
    out.dates.assign(days.begin(), days.begin() + static_cast<std::ptrdiff_t>(rows));
    return out;
}

ReturnsMatrix factor_returns(std::size_t rows, std::size_t assets, std::uint64_t seed) {
    Gaussian g(seed);
    const std::size_t clusters = std::max<std::size_t>(1, assets / 5);
    std::vector<double> beta(assets), vol(assets);
    for (std::size_t i = 0; i < assets; ++i) {
        beta[i] = 0.5 + g.uniform();
        vol[i] = 0.005 + 0.015 * g.uniform();
    }
    ReturnsMatrix out;
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(assets));
    std::vector<double> cluster(clusters);
    for (std::size_t t = 0; t < rows; ++t) {
        const double market = 0.0003 + 0.01 * g.next();
        for (auto& c : cluster) c = 0.006 * g.next();
        for (std::size_t i = 0; i < assets; ++i) {
            out.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
                beta[i] * market + cluster[i % clusters] + vol[i] * g.next();
        }
    }
    for (std::size_t i = 0; i < assets; ++i) out.tickers.push_back("S" + std::to_string(i));
    const auto days = business_days(make_date(2000, 1, 3), make_date(2100, 1, 1));
    out.dates.assign(days.begin(), days.begin() + static_cast<std::ptrdiff_t>(rows));
    return out;
}

std::filesystem::path write_fixture(const std::filesystem::path& dir, std::size_t sectors,
                                    std::size_t assets, std::uint64_t seed) {
    Json sector_list = Json::array();
    for (std::size_t s = 0; s < sectors; ++s) {
        SectorSpec spec;
        spec.name = sector_name(s);
        spec.assets = assets;
        spec.clusters = 3 + s % 3;
        spec.seed = seed * 1000003ull + s;
        const auto series = sector_prices(spec);
        Json tickers = Json::array();
        for (const auto& ps : series) {
            std::ostringstream csv;
            write_price_csv(csv, ps);
            atomic_write(dir / spec.name / (ps.ticker + ".csv"), csv.str());
            tickers.push_back(ps.ticker);
        }
        sector_list.push_back({{"name", spec.name}, {"tickers", tickers}, {"data_dir", spec.name}});
    }
    const Json config{{"sectors", sector_list},
                      {"train", {{"start", "2016-01-01"}, {"end", "2020-12-31"}}},
                      {"test", {{"start", "2021-01-01"}, {"end", "2021-11-01"}}},
                      {"risk_free", 0.0},
                      {"output_dir", "out"}};
    const auto path = dir / "config.json";
    atomic_write(path, dump(config));
    return path;
}

}  // namespace pfolio::synthetic
