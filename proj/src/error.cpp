#include "pfolio/error.hpp"

namespace pfolio {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::DuplicateDate: return "DuplicateDate";
        case ErrorCode::EmptyIntersection: return "EmptyIntersection";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::InsufficientObservations: return "InsufficientObservations";
        case ErrorCode::ZeroVarianceAsset: return "ZeroVarianceAsset";
        case ErrorCode::ZeroVolatility: return "ZeroVolatility";
        case ErrorCode::MalformedTree: return "MalformedTree";
        case ErrorCode::DegenerateLoadingSum: return "DegenerateLoadingSum";
        case ErrorCode::NoViableCandidate: return "NoViableCandidate";
        case ErrorCode::TickerMismatch: return "TickerMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace pfolio
