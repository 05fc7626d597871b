#pragma once

// Report serialization. The JSON document is canonical: keys sorted, floats
// printed with 17 significant digits, no timings or file names, so identical
// inputs give identical bytes.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>

#include "experiment.hpp"

namespace saext {

class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void put_string(std::string& out, std::string const& s) {
    out += '"';
    for (unsigned char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (ch < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                out += buf;
            } else {
                out += static_cast<char>(ch);
            }
        }
    }
    out += '"';
}

inline std::string fmt17(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void put_json(std::string& out, Json const& j, int indent) {
    std::string const pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::string const pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<long long>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<unsigned long long>()); break;
    case Json::value_t::number_float: out += fmt17(j.get<double>()); break;
    case Json::value_t::string: put_string(out, j.get<std::string>()); break;
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            break;
        }
        bool const flat = std::all_of(j.begin(), j.end(), [](Json const& e) { return e.is_primitive(); });
        out += '[';
        bool first = true;
        for (auto const& e : j) {
            out += first ? "" : ",";
            if (flat) {
                out += first ? "" : " ";
            } else {
                out += '\n';
                out += pad_in;
            }
            put_json(out, e, indent + 1);
            first = false;
        }
        if (!flat) {
            out += '\n';
            out += pad;
        }
        out += ']';
        break;
    }
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += "{";
        bool first = true;
        for (auto const& [k, v] : j.items()) { // std::map storage: keys already sorted
            out += first ? "\n" : ",\n";
            out += pad_in;
            put_string(out, k);
            out += ": ";
            put_json(out, v, indent + 1);
            first = false;
        }
        out += '\n';
        out += pad;
        out += '}';
        break;
    }
    default: out += "null";
    }
}

inline Json check_json(Check const& c) {
    Json j{{"name", c.name}, {"status", c.status}, {"value", c.value}, {"details", c.details}};
    j["lo"] = c.lo ? Json(*c.lo) : Json(nullptr);
    j["hi"] = c.hi ? Json(*c.hi) : Json(nullptr);
    if (!c.message.empty()) j["message"] = c.message;
    return j;
}

inline std::string safe_name(std::string s) {
    for (char& ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.' || ch == '+')) ch = '_';
    return s;
}

inline std::string fmt_csv(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_file(std::filesystem::path const& p, std::string const& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    f << content;
    if (!f) throw IoError("write failed for " + p.string());
}

} // namespace detail

/// Canonical serialization of any JSON value.
inline std::string canonical_json(Json const& j) {
    std::string out;
    detail::put_json(out, j, 0);
    out += '\n';
    return out;
}

/// Deterministic content of a run: config echo, checks, series.
inline Json report_json(RunReport const& r) {
    Json j;
    j["suite"] = r.suite;
    j["model_id"] = r.model_id;
    j["config"] = r.config;
    j["checks"] = Json::array();
    for (auto const& c : r.checks) j["checks"].push_back(detail::check_json(c));
    j["series"] = Json::array();
    for (auto const& s : r.series) {
        Json sj{{"name", s.name}, {"columns", s.columns}};
        sj["rows"] = Json::array();
        for (auto const& row : s.rows) sj["rows"].push_back(row);
        j["series"].push_back(sj);
    }
    j["summary"] = {{"checks", r.checks.size()},
                    {"pass", r.count("pass")},
                    {"fail", r.count("fail")},
                    {"error", r.count("error")},
                    {"skipped", r.count("skipped")},
                    {"all_pass", r.all_pass()}};
    return j;
}

/// One line per check: name, status, value.
inline std::string text_summary(RunReport const& r, bool with_timings = true) {
    std::string out;
    char buf[512];
    for (auto const& c : r.checks) {
        std::string bound;
        if (c.lo) bound += ">= " + detail::fmt_csv(*c.lo);
        if (c.hi) bound += (bound.empty() ? "" : ", ") + std::string("<= ") + detail::fmt_csv(*c.hi);
        std::snprintf(buf, sizeof buf, "%-7s %-70s %.6e  (%s)", c.status.c_str(), c.name.c_str(), c.value, bound.c_str());
        out += buf;
        if (!c.message.empty()) out += "  " + c.message;
        out += '\n';
    }
    std::snprintf(buf, sizeof buf, "%zu checks: %zu pass, %zu fail, %zu error, %zu skipped\n", r.checks.size(), r.count("pass"),
                  r.count("fail"), r.count("error"), r.count("skipped"));
    out += buf;
    if (with_timings) {
        for (auto const& t : r.timings) {
            std::snprintf(buf, sizeof buf, "time %-70s %.3f s\n", t.item.c_str(), t.seconds);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, "total %.3f s\n", r.total_seconds);
        out += buf;
    }
    return out;
}

/// UTC timestamp used in artifact names.
inline std::string utc_stamp() {
    std::time_t const t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

/// Write the report as `<suite>-<model-id>-<stamp>.<ext>` in `dir`, plus a
/// manifest sidecar with timings and the artifact list. Returns the files written.
inline std::vector<std::string> emit_report(RunReport& r, std::string const& format, std::string const& dir,
                                            std::string const& stamp) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    std::string const base = detail::safe_name(r.suite + "-" + r.model_id + "-" + stamp);
    std::vector<std::string> files;
    auto put = [&](std::string const& name, std::string const& content) {
        fs::path const p = fs::path(dir) / name;
        detail::write_file(p, content);
        files.push_back(p.string());
    };

    if (format == "json") {
        put(base + ".json", canonical_json(report_json(r)));
    } else if (format == "csv") {
        std::string checks = "name,status,value,lo,hi\n";
        for (auto const& c : r.checks)
            checks += c.name + "," + c.status + "," + detail::fmt_csv(c.value) + "," + (c.lo ? detail::fmt_csv(*c.lo) : "") + "," +
                      (c.hi ? detail::fmt_csv(*c.hi) : "") + "\n";
        put(base + ".csv", checks);
        for (auto const& s : r.series) {
            std::string body;
            for (std::size_t i = 0; i < s.columns.size(); ++i) body += (i ? "," : "") + s.columns[i];
            body += '\n';
            for (auto const& row : s.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) body += (i ? "," : "") + detail::fmt_csv(row[i]);
                body += '\n';
            }
            put(base + "-" + detail::safe_name(s.name) + ".csv", body);
        }
    } else if (format == "text") {
        put(base + ".txt", text_summary(r));
    } else {
        throw ConfigError("unknown output format '" + format + "'");
    }

    Json manifest;
    manifest["artifacts"] = files;
    manifest["timings"] = Json::array();
    for (auto const& t : r.timings) manifest["timings"].push_back({{"item", t.item}, {"seconds", t.seconds}});
    manifest["total_seconds"] = r.total_seconds;
    manifest["timestamp"] = stamp;
    put(base + ".manifest.json", canonical_json(manifest));
    r.artifacts = files;
    return files;
}

} // namespace saext
