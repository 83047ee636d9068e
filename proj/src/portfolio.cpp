#include "pfolio/portfolio.hpp"

#include <algorithm>

namespace pfolio {

std::string_view to_string(Method method) noexcept {
    return method == Method::Hrp ? "HRP" : "EIGEN";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
    if (text == "HRP") return Method::Hrp;
    if (text == "EIGEN") return Method::Eigen;
    return std::nullopt;
}

std::optional<double> PortfolioWeights::weight_of(std::string_view ticker) const {
    const auto it = std::find(tickers.begin(), tickers.end(), ticker);
    if (it == tickers.end()) return std::nullopt;
    return weights[static_cast<std::size_t>(it - tickers.begin())];
}

}  // namespace pfolio
