#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfolio/date.hpp"

namespace pfolio {

struct PriceObservation {
    Date date;
    double close = 0.0;

    bool operator==(const PriceObservation&) const = default;
};

/// Close prices of one ticker. Dates strictly increasing; closes finite and > 0.
struct PriceSeries {
    std::string ticker;
    std::vector<PriceObservation> observations;
};

/// What to do with a row whose Close cell is empty or non-numeric.
enum class MissingClosePolicy {
    Skip,    ///< drop the row
    Reject,  ///< raise MalformedCsv
};

enum class AlignmentPolicy {
    Intersection,  ///< keep only dates present in every series
    ForwardFill,   ///< union of dates, carry the last close forward
};

/// Date-aligned close prices: `closes(t, i)` is ticker `i` on `dates[t]`.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<Date> dates;
    Eigen::MatrixXd closes;

    std::size_t num_dates() const { return dates.size(); }
    std::size_t num_assets() const { return tickers.size(); }
    std::optional<std::size_t> ticker_index(std::string_view ticker) const;
};

enum class PeriodLabel { Train, Test };

/// Inclusive calendar window.
struct PeriodSpec {
    PeriodLabel label = PeriodLabel::Train;
    Date start;
    Date end;
};

std::string_view to_string(PeriodLabel label) noexcept;

bool periods_overlap(const PeriodSpec& a, const PeriodSpec& b) noexcept;

/// Reads a `Date,Close[,...]` CSV. Extra columns are ignored, rows come back
/// sorted ascending by date.
PriceSeries parse_price_csv(std::istream& source, std::string ticker,
                            MissingClosePolicy policy = MissingClosePolicy::Skip);

/// Reads a wide CSV (`Date` followed by one column per ticker) into one series
/// per ticker column. Empty cells are handled by `policy`.
std::vector<PriceSeries> parse_wide_csv(std::istream& source,
                                        MissingClosePolicy policy = MissingClosePolicy::Skip);

PriceSeries load_price_csv(const std::filesystem::path& path, std::string ticker,
                           MissingClosePolicy policy = MissingClosePolicy::Skip);

std::vector<PriceSeries> load_wide_csv(const std::filesystem::path& path,
                                       MissingClosePolicy policy = MissingClosePolicy::Skip);

/// Writes `Date,Close` with round-trip precision.
void write_price_csv(std::ostream& out, const PriceSeries& series);

PricePanel align_panel(std::span<const PriceSeries> series, AlignmentPolicy policy);

/// Restricts the panel to dates inside `[period.start, period.end]`.
PricePanel slice_period(const PricePanel& panel, const PeriodSpec& period);

}  // namespace pfolio
