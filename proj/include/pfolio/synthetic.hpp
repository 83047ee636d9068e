#pragma once

// Seeded synthetic market data for tests, benchmarks and the bundled fixtures.
// Output depends only on the seed: the generator avoids std distributions,
// whose algorithms differ between standard libraries.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pfolio/market_data.hpp"
#include "pfolio/returns_stats.hpp"

namespace pfolio::synthetic {

class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double uniform();  ///< in (0, 1)
    double next();     ///< standard normal

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Monday-to-Friday dates in [start, end].
std::vector<Date> business_days(Date start, Date end);

struct SectorSpec {
    std::string name;
    std::size_t assets = 10;
    std::size_t clusters = 3;
    std::uint64_t seed = 1;
    Date start = make_date(2016, 1, 1);
    Date end = make_date(2021, 11, 1);
};

/// Factor-model prices: market + cluster factor + idiosyncratic noise.
std::vector<PriceSeries> sector_prices(const SectorSpec& spec);

/// Returns with `within_rho` correlation inside each block and none across.
/// `block_of[i]` is the block of asset i.
ReturnsMatrix block_returns(std::size_t rows, const std::vector<std::size_t>& block_of,
                            double within_rho, double daily_vol, std::uint64_t seed);

/// Generic factor-model returns for N assets.
ReturnsMatrix factor_returns(std::size_t rows, std::size_t assets, std::uint64_t seed);

/// Writes `<dir>/<sector>/<TICKER>.csv` for `sectors` synthetic sectors plus
/// `<dir>/config.json`, and returns the config path.
std::filesystem::path write_fixture(const std::filesystem::path& dir, std::size_t sectors,
                                    std::size_t assets, std::uint64_t seed);

}  // namespace pfolio::synthetic
