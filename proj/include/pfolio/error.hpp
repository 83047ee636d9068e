#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfolio {

enum class ErrorCode {
    MalformedCsv,
    NonPositivePrice,
    DuplicateDate,
    EmptyIntersection,
    InsufficientHistory,
    InsufficientObservations,
    ZeroVarianceAsset,
    ZeroVolatility,
    MalformedTree,
    DegenerateLoadingSum,
    NoViableCandidate,
    TickerMismatch,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can report the stage and cause.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pfolio
