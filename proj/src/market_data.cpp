#include "pfolio/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "pfolio/error.hpp"

namespace pfolio {

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\"";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF) {
        s.erase(0, 3);
    }
}

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
    });
}

/// nullopt when the cell is empty or not a number; NaN counts as missing.
std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
    if (std::isnan(value)) return std::nullopt;
    return value;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line no, cells)
};

CsvTable read_table(std::istream& source) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (!have_header) strip_bom(line);
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        for (auto cell : split(line, ',')) cells.emplace_back(trim(cell));
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::MalformedCsv,
                        "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(table.header.size()));
        }
        table.rows.emplace_back(line_no, std::move(cells));
    }
    if (!have_header) throw Error(ErrorCode::MalformedCsv, "missing header row");
    return table;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (iequals(header[i], name)) return i;
    }
    return std::nullopt;
}

Date parse_row_date(std::string_view cell, std::size_t line_no) {
    const auto date = parse_date(cell);
    if (!date) {
        throw Error(ErrorCode::MalformedCsv,
                    "line " + std::to_string(line_no) + ": bad date '" + std::string(cell) + "'");
    }
    return *date;
}

/// Applies the missing/positivity rules to one cell. Returns nullopt when the
/// row should be skipped.
std::optional<double> checked_close(std::string_view cell, std::size_t line_no,
                                    std::string_view ticker, MissingClosePolicy policy) {
    const auto value = parse_number(cell);
    if (!value) {
        if (policy == MissingClosePolicy::Skip) return std::nullopt;
        throw Error(ErrorCode::MalformedCsv, std::string(ticker) + " line " +
                                                 std::to_string(line_no) + ": missing close '" +
                                                 std::string(cell) + "'");
    }
    if (!std::isfinite(*value) || *value <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice, std::string(ticker) + " line " +
                                                     std::to_string(line_no) + ": close " +
                                                     std::string(cell));
    }
    return value;
}

void sort_and_check(PriceSeries& series) {
    std::stable_sort(series.observations.begin(), series.observations.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.observations.size(); ++i) {
        if (series.observations[i].date == series.observations[i - 1].date) {
            throw Error(ErrorCode::DuplicateDate,
                        series.ticker + ": " + format_date(series.observations[i].date));
        }
    }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return in;
}

}  // namespace

std::optional<std::size_t> PricePanel::ticker_index(std::string_view ticker) const {
    const auto it = std::find(tickers.begin(), tickers.end(), ticker);
    if (it == tickers.end()) return std::nullopt;
    return static_cast<std::size_t>(it - tickers.begin());
}

std::string_view to_string(PeriodLabel label) noexcept {
    return label == PeriodLabel::Train ? "train" : "test";
}

bool periods_overlap(const PeriodSpec& a, const PeriodSpec& b) noexcept {
    return a.start <= b.end && b.start <= a.end;
}

PriceSeries parse_price_csv(std::istream& source, std::string ticker, MissingClosePolicy policy) {
    const CsvTable table = read_table(source);
    const auto date_col = find_column(table.header, "Date");
    const auto close_col = find_column(table.header, "Close");
    if (!date_col || !close_col) {
        throw Error(ErrorCode::MalformedCsv, ticker + ": header needs Date and Close columns");
    }

    PriceSeries series{std::move(ticker), {}};
    series.observations.reserve(table.rows.size());
    for (const auto& [line_no, cells] : table.rows) {
        const Date date = parse_row_date(cells[*date_col], line_no);
        if (auto close = checked_close(cells[*close_col], line_no, series.ticker, policy)) {
            series.observations.push_back({date, *close});
        }
    }
    sort_and_check(series);
    return series;
}

std::vector<PriceSeries> parse_wide_csv(std::istream& source, MissingClosePolicy policy) {
    const CsvTable table = read_table(source);
    const auto date_col = find_column(table.header, "Date");
    if (!date_col) throw Error(ErrorCode::MalformedCsv, "wide CSV header needs a Date column");
    if (table.header.size() < 2) throw Error(ErrorCode::MalformedCsv, "wide CSV has no tickers");

    std::vector<PriceSeries> out;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == *date_col) continue;
        if (table.header[c].empty()) throw Error(ErrorCode::MalformedCsv, "empty ticker column name");
        out.push_back({table.header[c], {}});
        cols.push_back(c);
    }
    for (const auto& [line_no, cells] : table.rows) {
        const Date date = parse_row_date(cells[*date_col], line_no);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (auto close = checked_close(cells[cols[k]], line_no, out[k].ticker, policy)) {
                out[k].observations.push_back({date, *close});
            }
        }
    }
    for (auto& s : out) sort_and_check(s);
    return out;
}

PriceSeries load_price_csv(const std::filesystem::path& path, std::string ticker,
                           MissingClosePolicy policy) {
    auto in = open_or_throw(path);
    return parse_price_csv(in, std::move(ticker), policy);
}

std::vector<PriceSeries> load_wide_csv(const std::filesystem::path& path,
                                       MissingClosePolicy policy) {
    auto in = open_or_throw(path);
    return parse_wide_csv(in, policy);
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
    out << "Date,Close\n";
    char buf[64];
    for (const auto& obs : series.observations) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), obs.close);
        out << format_date(obs.date) << ',' << std::string_view(buf, ptr - buf) << '\n';
    }
}

PricePanel align_panel(std::span<const PriceSeries> series, AlignmentPolicy policy) {
    if (series.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "alignment needs at least two series");
    }
    std::unordered_set<std::string> seen;
    for (const auto& s : series) {
        if (s.observations.empty()) throw Error(ErrorCode::InvalidArgument, s.ticker + " is empty");
        if (!seen.insert(s.ticker).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate ticker " + s.ticker);
        }
    }

    PricePanel panel;
    for (const auto& s : series) panel.tickers.push_back(s.ticker);
    const std::size_t n = series.size();

    if (policy == AlignmentPolicy::Intersection) {
        std::vector<Date> common;
        for (const auto& obs : series[0].observations) common.push_back(obs.date);
        for (std::size_t i = 1; i < n && !common.empty(); ++i) {
            std::vector<Date> dates;
            for (const auto& obs : series[i].observations) dates.push_back(obs.date);
            std::vector<Date> next;
            std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                                  std::back_inserter(next));
            common = std::move(next);
        }
        if (common.empty()) throw Error(ErrorCode::EmptyIntersection, "no date common to all series");
        if (common.size() < 2) {
            throw Error(ErrorCode::InsufficientHistory, "only one common date after alignment");
        }
        panel.dates = std::move(common);
        panel.closes.resize(static_cast<Eigen::Index>(panel.dates.size()), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const auto& obs = series[i].observations;
            std::size_t cursor = 0;
            for (std::size_t t = 0; t < panel.dates.size(); ++t) {
                while (obs[cursor].date < panel.dates[t]) ++cursor;
                panel.closes(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
                    obs[cursor].close;
            }
        }
        return panel;
    }

    std::set<Date> all_dates;
    for (const auto& s : series) {
        for (const auto& obs : s.observations) all_dates.insert(obs.date);
    }
    // The first date on which every ticker has a close at or before it.
    Date first_full = series[0].observations.front().date;
    for (const auto& s : series) first_full = std::max(first_full, s.observations.front().date);

    for (Date d : all_dates) {
        if (d >= first_full) panel.dates.push_back(d);
    }
    if (panel.dates.size() < 2) {
        throw Error(ErrorCode::InsufficientHistory, "fewer than two dates after forward fill");
    }
    panel.closes.resize(static_cast<Eigen::Index>(panel.dates.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& obs = series[i].observations;
        std::size_t cursor = 0;
        for (std::size_t t = 0; t < panel.dates.size(); ++t) {
            while (cursor + 1 < obs.size() && obs[cursor + 1].date <= panel.dates[t]) ++cursor;
            panel.closes(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = obs[cursor].close;
        }
    }
    return panel;
}

PricePanel slice_period(const PricePanel& panel, const PeriodSpec& period) {
    if (period.end < period.start) {
        throw Error(ErrorCode::InvalidArgument, "period end precedes start");
    }
    const auto lo = std::lower_bound(panel.dates.begin(), panel.dates.end(), period.start);
    const auto hi = std::upper_bound(panel.dates.begin(), panel.dates.end(), period.end);
    const auto count = static_cast<Eigen::Index>(hi - lo);
    if (count < 2) {
        throw Error(ErrorCode::InsufficientHistory,
                    std::string(to_string(period.label)) + " window " + format_date(period.start) +
                        ".." + format_date(period.end) + " holds " + std::to_string(count) +
                        " date(s)");
    }
    PricePanel out;
    out.tickers = panel.tickers;
    out.dates.assign(lo, hi);
    out.closes = panel.closes.middleRows(lo - panel.dates.begin(), count);
    return out;
}

}  // namespace pfolio
