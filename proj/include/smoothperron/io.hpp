#pragma once

// JSON emission with 17 significant digits and the run manifest.

#include <fmt/format.h>
#include <json.hpp>  // vendored nlohmann::json

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace smoothperron::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";  // parses back as +-inf
    return fmt::format("{:.17g}", v);
}

namespace detail {

inline void dump(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += sep;
                dump(it.value(), out, indent, depth + 1);
            }
            out += nl;
            out += close_pad;
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ",";
                    out += nl;
                }
                out += pad;
                dump(j[i], out, indent, depth + 1);
            }
            out += nl;
            out += close_pad;
            out += "]";
            return;
        }
        case Json::value_t::number_float: out += format_double(j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

}  // namespace detail

/// Like Json::dump but every floating-point number carries 17 significant digits.
inline std::string dump17(const Json& j, int indent = 2) {
    std::string out;
    detail::dump(j, out, indent, 0);
    return out;
}

inline Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    std::string tool_version;
    std::vector<std::string> outputs;
    double wall_time = 0.0;

    Json to_json() const {
        Json j;
        j["subcommand"] = subcommand;
        j["parameters"] = Json::object();
        for (const auto& [k, v] : parameters) j["parameters"][k] = v;
        j["tool_version"] = tool_version;
        j["outputs"] = outputs;
        j["wall_time"] = wall_time;
        return j;
    }

    static RunManifest from_json(const Json& j) {
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        for (auto it = j.at("parameters").begin(); it != j.at("parameters").end(); ++it)
            m.parameters[it.key()] = it.value().get<std::string>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.wall_time = j.at("wall_time").get<double>();
        return m;
    }

    friend bool operator==(const RunManifest& a, const RunManifest& b) {
        return a.subcommand == b.subcommand && a.parameters == b.parameters && a.tool_version == b.tool_version &&
               a.outputs == b.outputs && a.wall_time == b.wall_time;
    }
};

}  // namespace smoothperron::io
