#ifndef BVW_REPORT_HPP
#define BVW_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parser.hpp"

namespace bvw {

using Json = nlohmann::json;

/* command output: echo + model hash + ordered payload; field order drives
   the text rendering, json-lines emits one object with sorted keys */
struct Report {
    std::string command;
    std::string model_hash;
    std::vector<std::pair<std::string, Json>> fields;

    void add(const std::string& k, Json v)
    {
        fields.emplace_back(k, std::move(v));
    }
};

inline Json mat_json(const Mat& m)
{
    Json rows = Json::array();
    for (auto& row : m) {
        Json r = Json::array();
        for (auto& v : row) r.push_back(rat_str(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace detail {

inline std::string text_value(const Json& v)
{
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.dump();
}

} // namespace detail

inline std::string emit_text(const Report& r)
{
    std::string out = "command: " + r.command + "\n";
    out += "model_hash: " + r.model_hash + "\n";
    for (auto& [k, v] : r.fields) {
        if (v.is_array() && !v.empty() && v.front().is_array()) {
            out += k + ":\n";
            for (auto& row : v) {
                out += " ";
                for (auto& e : row) out += " " + detail::text_value(e);
                out += "\n";
            }
            continue;
        }
        if (v.is_array()) {
            std::string joined;
            for (auto& e : v) {
                if (!joined.empty()) joined += "; ";
                joined += detail::text_value(e);
            }
            out += k + ": " + joined + "\n";
            continue;
        }
        out += k + ": " + detail::text_value(v) + "\n";
    }
    return out;
}

inline std::string emit_json_lines(const Report& r)
{
    Json j;
    j["command"] = r.command;
    j["model_hash"] = r.model_hash;
    for (auto& [k, v] : r.fields) j[k] = v;
    return j.dump() + "\n";
}

inline std::string emit(const Report& r, const std::string& format)
{
    if (format == "text") return emit_text(r);
    if (format == "json-lines") return emit_json_lines(r);
    throw error("unknown format: " + format);
}

} // namespace bvw

#endif
