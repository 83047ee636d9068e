#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace pfolio {

/// Calendar day. No intraday component and no timezone.
using Date = std::chrono::sys_days;

/// Parses strict ISO-8601 `YYYY-MM-DD`. Returns nullopt for anything else,
/// including impossible days such as 2021-02-30.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(Date date);

inline Date make_date(int year, unsigned month, unsigned day) {
    return std::chrono::sys_days{std::chrono::year{year} / std::chrono::month{month} /
                                 std::chrono::day{day}};
}

}  // namespace pfolio
