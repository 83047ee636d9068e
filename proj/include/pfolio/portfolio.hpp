#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfolio/date.hpp"

namespace pfolio {

enum class Method { Eigen, Hrp };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

/// Ticker-aligned allocation. Weights sum to one; HRP weights are strictly
/// positive, eigen weights may be negative.
struct PortfolioWeights {
    std::vector<std::string> tickers;
    std::vector<double> weights;
    Method method = Method::Hrp;
    std::optional<Date> built_on;
    std::map<std::string, std::string> metadata;

    std::optional<double> weight_of(std::string_view ticker) const;
};

}  // namespace pfolio
