#include "pfolio/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace pfolio {

namespace {

void warn_unknown(const Json& obj, std::initializer_list<std::string_view> known,
                  const std::string& where, std::vector<std::string>& warnings) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (auto k : known) found = found || key == k;
        if (!found) warnings.push_back("unknown key '" + where + key + "' ignored");
    }
}

std::optional<PeriodSpec> parse_period(const Json& j, PeriodLabel label, const std::string& field,
                                       std::vector<std::string>& errors,
                                       std::vector<std::string>& warnings) {
    if (!j.is_object()) {
        errors.push_back(field + ": expected an object with start and end");
        return std::nullopt;
    }
    warn_unknown(j, {"start", "end"}, field + ".", warnings);
    PeriodSpec p{label, {}, {}};
    bool ok = true;
    for (const char* key : {"start", "end"}) {
        const auto it = j.find(key);
        std::optional<Date> d;
        if (it != j.end() && it->is_string()) d = parse_date(it->get<std::string>());
        if (!d) {
            errors.push_back(field + "." + key + ": expected a YYYY-MM-DD date");
            ok = false;
            continue;
        }
        (std::string_view(key) == "start" ? p.start : p.end) = *d;
    }
    if (ok && p.end < p.start) {
        errors.push_back(field + ": end precedes start");
        ok = false;
    }
    return ok ? std::optional(p) : std::nullopt;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

Json ExperimentConfig::to_json() const {
    Json sectors_json = Json::array();
    for (const auto& s : sectors) {
        Json sj{{"name", s.name}, {"tickers", s.tickers}};
        if (s.data_dir) sj["data_dir"] = s.data_dir->generic_string();
        if (s.wide_csv) sj["wide_csv"] = s.wide_csv->generic_string();
        sectors_json.push_back(std::move(sj));
    }
    return Json{
        {"sectors", sectors_json},
        {"train", {{"start", format_date(train.start)}, {"end", format_date(train.end)}}},
        {"test", {{"start", format_date(test.start)}, {"end", format_date(test.end)}}},
        {"risk_free", risk_free},
        {"alignment", alignment == AlignmentPolicy::Intersection ? "intersection" : "forward_fill"},
        {"missing_close", missing_close == MissingClosePolicy::Skip ? "skip" : "reject"},
        {"hrp", {{"distance", to_string(hrp.distance)}, {"linkage", to_string(hrp.linkage)}}},
        {"eigen",
         {{"standardize", eigen.standardize}, {"variance_threshold", eigen.variance_threshold}}},
        {"output_dir", output_dir.generic_string()},
    };
}

std::string ExperimentConfig::hash() const {
    Json j = to_json();
    j.erase("output_dir");
    for (auto& s : j["sectors"]) {
        s.erase("data_dir");
        s.erase("wide_csv");
    }
    return fnv1a_hex(j.dump());
}

ConfigResult validate_config(std::string_view text, const std::filesystem::path& base_dir) {
    ConfigResult result;
    auto& errors = result.errors;
    auto& warnings = result.warnings;

    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        errors.push_back(std::string("config is not valid JSON: ") + e.what());
        return result;
    }
    if (!root.is_object()) {
        errors.push_back("config root must be an object");
        return result;
    }
    warn_unknown(root,
                 {"sectors", "train", "test", "risk_free", "alignment", "missing_close", "hrp",
                  "eigen", "output_dir"},
                 "", warnings);

    ExperimentConfig cfg;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    // sectors
    if (!root.contains("sectors") || !root["sectors"].is_array() || root["sectors"].empty()) {
        errors.push_back("sectors: expected a non-empty array");
    } else {
        std::set<std::string> names;
        for (std::size_t i = 0; i < root["sectors"].size(); ++i) {
            const auto& sj = root["sectors"][i];
            const std::string where = "sectors[" + std::to_string(i) + "]";
            if (!sj.is_object()) {
                errors.push_back(where + ": expected an object");
                continue;
            }
            warn_unknown(sj, {"name", "tickers", "data_dir", "wide_csv"}, where + ".", warnings);
            SectorSpec s;
            if (sj.contains("name") && sj["name"].is_string() && !sj["name"].get<std::string>().empty()) {
                s.name = sj["name"].get<std::string>();
                if (s.name.find_first_of("/\\") != std::string::npos || s.name == "." || s.name == "..") {
                    errors.push_back(where + ".name: must not contain path separators");
                }
                if (!names.insert(s.name).second) errors.push_back(where + ".name: duplicate sector '" + s.name + "'");
            } else {
                errors.push_back(where + ".name: expected a non-empty string");
            }
            const std::string label = s.name.empty() ? where : "sector '" + s.name + "'";
            if (sj.contains("tickers") && sj["tickers"].is_array()) {
                std::set<std::string> seen;
                for (const auto& t : sj["tickers"]) {
                    if (!t.is_string() || t.get<std::string>().empty()) {
                        errors.push_back(label + ".tickers: entries must be non-empty strings");
                        continue;
                    }
                    if (!seen.insert(t.get<std::string>()).second) {
                        errors.push_back(label + ".tickers: duplicate ticker " + t.get<std::string>());
                    }
                    s.tickers.push_back(t.get<std::string>());
                }
                if (s.tickers.size() < 2) errors.push_back(label + ".tickers: needs at least 2 tickers");
            } else {
                errors.push_back(label + ".tickers: expected an array");
            }
            const bool has_dir = sj.contains("data_dir");
            const bool has_wide = sj.contains("wide_csv");
            if (has_dir == has_wide) {
                errors.push_back(label + ": set exactly one of data_dir or wide_csv");
            } else if (has_dir && sj["data_dir"].is_string()) {
                s.data_dir = resolve(sj["data_dir"].get<std::string>());
            } else if (has_wide && sj["wide_csv"].is_string()) {
                s.wide_csv = resolve(sj["wide_csv"].get<std::string>());
            } else {
                errors.push_back(label + ": data path must be a string");
            }
            cfg.sectors.push_back(std::move(s));
        }
    }

    // periods
    if (root.contains("train")) {
        if (auto p = parse_period(root["train"], PeriodLabel::Train, "train", errors, warnings)) cfg.train = *p;
    } else {
        cfg.applied_defaults.push_back("train=" + format_date(cfg.train.start) + ".." + format_date(cfg.train.end));
    }
    if (root.contains("test")) {
        if (auto p = parse_period(root["test"], PeriodLabel::Test, "test", errors, warnings)) cfg.test = *p;
    } else {
        cfg.applied_defaults.push_back("test=" + format_date(cfg.test.start) + ".." + format_date(cfg.test.end));
    }
    if (periods_overlap(cfg.train, cfg.test)) {
        errors.push_back("train and test periods overlap");
    }

    if (root.contains("risk_free")) {
        if (root["risk_free"].is_number()) {
            cfg.risk_free = root["risk_free"].get<double>();
        } else {
            errors.push_back("risk_free: expected a number (annual rate)");
        }
    } else {
        cfg.applied_defaults.push_back("risk_free=0");
    }

    if (root.contains("alignment")) {
        const auto& a = root["alignment"];
        if (a == "intersection") {
            cfg.alignment = AlignmentPolicy::Intersection;
        } else if (a == "forward_fill") {
            cfg.alignment = AlignmentPolicy::ForwardFill;
        } else {
            errors.push_back("alignment: expected 'intersection' or 'forward_fill'");
        }
    } else {
        cfg.applied_defaults.push_back("alignment=intersection");
    }

    if (root.contains("missing_close")) {
        const auto& m = root["missing_close"];
        if (m == "skip") {
            cfg.missing_close = MissingClosePolicy::Skip;
        } else if (m == "reject") {
            cfg.missing_close = MissingClosePolicy::Reject;
        } else {
            errors.push_back("missing_close: expected 'skip' or 'reject'");
        }
    } else {
        cfg.applied_defaults.push_back("missing_close=skip");
    }

    const Json hrp = root.value("hrp", Json::object());
    if (!hrp.is_object()) {
        errors.push_back("hrp: expected an object");
    } else {
        warn_unknown(hrp, {"distance", "linkage"}, "hrp.", warnings);
        if (hrp.contains("distance")) {
            const auto mode = hrp["distance"].is_string()
                                  ? parse_distance_mode(hrp["distance"].get<std::string>())
                                  : std::nullopt;
            if (mode) {
                cfg.hrp.distance = *mode;
            } else {
                errors.push_back("hrp.distance: expected 'sqrt_half' or 'euclidean_returns'");
            }
        } else {
            cfg.applied_defaults.push_back("hrp.distance=sqrt_half");
        }
        if (hrp.contains("linkage")) {
            const auto method = hrp["linkage"].is_string()
                                    ? parse_linkage_method(hrp["linkage"].get<std::string>())
                                    : std::nullopt;
            if (method) {
                cfg.hrp.linkage = *method;
            } else {
                errors.push_back("hrp.linkage: expected ward, single, complete or average");
            }
        } else {
            cfg.applied_defaults.push_back("hrp.linkage=ward");
        }
    }

    const Json eigen = root.value("eigen", Json::object());
    if (!eigen.is_object()) {
        errors.push_back("eigen: expected an object");
    } else {
        warn_unknown(eigen, {"standardize", "variance_threshold"}, "eigen.", warnings);
        if (eigen.contains("standardize")) {
            if (eigen["standardize"].is_boolean()) {
                cfg.eigen.standardize = eigen["standardize"].get<bool>();
            } else {
                errors.push_back("eigen.standardize: expected true or false");
            }
        } else {
            cfg.applied_defaults.push_back("eigen.standardize=true");
        }
        if (eigen.contains("variance_threshold")) {
            const auto& t = eigen["variance_threshold"];
            if (t.is_number() && t.get<double>() > 0.0 && t.get<double>() <= 1.0) {
                cfg.eigen.variance_threshold = t.get<double>();
            } else {
                errors.push_back("eigen.variance_threshold: must be a number in (0, 1]");
            }
        } else {
            cfg.applied_defaults.push_back("eigen.variance_threshold=0.8");
        }
    }

    if (root.contains("output_dir")) {
        if (root["output_dir"].is_string()) {
            cfg.output_dir = root["output_dir"].get<std::string>();
        } else {
            errors.push_back("output_dir: expected a string");
        }
    } else {
        cfg.applied_defaults.push_back("output_dir=out");
    }

    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

ConfigResult load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.errors.push_back("cannot read config " + path.string());
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return validate_config(buf.str(), path.parent_path());
}

std::vector<std::string> apply_env_overrides(ExperimentConfig& config) {
    std::vector<std::string> errors;
    if (const char* rf = std::getenv("PFOLIO_RISK_FREE"); rf && *rf) {
        char* end = nullptr;
        const double v = std::strtod(rf, &end);
        if (end == rf || *end != '\0') {
            errors.push_back(std::string("PFOLIO_RISK_FREE: not a number '") + rf + "'");
        } else {
            config.risk_free = v;
        }
    }
    if (const char* out = std::getenv("PFOLIO_OUT_DIR"); out && *out) config.output_dir = out;
    return errors;
}

}  // namespace pfolio
