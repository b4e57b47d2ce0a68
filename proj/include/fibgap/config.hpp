#pragma once

/**
 * @file config.hpp
 * @brief SystemSpec <-> JSON.
 *
 * Schema:
 *
 *     { "kind": "mass-spring" | "rod" | "beam",
 *       "params": { ...fields of the matching parameter record... } }
 *
 * mass-spring: mass_A, mass_B, stiffness_A, stiffness_B
 * rod:         length_A, length_B, area_A, area_B, young_A, young_B, density_A, density_B
 * beam:        span_A, span_B, radius_of_inertia, P
 *
 * Unknown keys are rejected so that typos do not silently fall back to defaults.
 */

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fibgap/errors.hpp"
#include "fibgap/systems.hpp"

namespace fibgap {

namespace detail {

inline double required_number(const nlohmann::json& params, const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(std::string("config: missing parameter '") + key + "'");
    if (!it->is_number()) throw ConfigError(std::string("config: parameter '") + key + "' must be a number");
    return it->get<double>();
}

inline void reject_unknown(const nlohmann::json& params, std::initializer_list<const char*> allowed) {
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, _] : params.items()) {
        if (!names.count(key)) throw ConfigError("config: unknown parameter '" + key + "'");
    }
}

} // namespace detail

inline SystemSpec parse_system_spec(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    const auto kind_it = doc.find("kind");
    if (kind_it == doc.end() || !kind_it->is_string()) throw ConfigError("config: missing string field 'kind'");
    const auto params_it = doc.find("params");
    if (params_it == doc.end() || !params_it->is_object()) throw ConfigError("config: missing object field 'params'");
    const std::string kind = kind_it->get<std::string>();
    const nlohmann::json& p = *params_it;

    try {
        if (kind == "mass-spring") {
            detail::reject_unknown(p, {"mass_A", "mass_B", "stiffness_A", "stiffness_B"});
            return SystemSpec(MassSpringParams{detail::required_number(p, "mass_A"), detail::required_number(p, "mass_B"),
                                               detail::required_number(p, "stiffness_A"),
                                               detail::required_number(p, "stiffness_B")});
        }
        if (kind == "rod") {
            detail::reject_unknown(p, {"length_A", "length_B", "area_A", "area_B", "young_A", "young_B", "density_A",
                                       "density_B"});
            return SystemSpec(RodParams{
                detail::required_number(p, "length_A"), detail::required_number(p, "length_B"),
                detail::required_number(p, "area_A"), detail::required_number(p, "area_B"),
                detail::required_number(p, "young_A"), detail::required_number(p, "young_B"),
                detail::required_number(p, "density_A"), detail::required_number(p, "density_B")});
        }
        if (kind == "beam") {
            detail::reject_unknown(p, {"span_A", "span_B", "radius_of_inertia", "P"});
            return SystemSpec(BeamParams{detail::required_number(p, "span_A"), detail::required_number(p, "span_B"),
                                         detail::required_number(p, "radius_of_inertia"),
                                         detail::required_number(p, "P")});
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown kind '" + kind + "'");
}

inline SystemSpec parse_system_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_system_spec(doc);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SystemSpec load_system_spec(const std::string& path) { return parse_system_spec(read_text_file(path)); }

inline nlohmann::json to_json(const SystemSpec& spec) {
    nlohmann::json doc;
    doc["kind"] = std::string(to_string(spec.kind()));
    switch (spec.kind()) {
    case SystemKind::MassSpring: {
        const auto& p = spec.mass_spring();
        doc["params"] = {{"mass_A", p.mass_A}, {"mass_B", p.mass_B}, {"stiffness_A", p.stiffness_A},
                         {"stiffness_B", p.stiffness_B}};
        break;
    }
    case SystemKind::Rod: {
        const auto& p = spec.rod();
        doc["params"] = {{"length_A", p.length_A}, {"length_B", p.length_B}, {"area_A", p.area_A},
                         {"area_B", p.area_B},     {"young_A", p.young_A},   {"young_B", p.young_B},
                         {"density_A", p.density_A}, {"density_B", p.density_B}};
        break;
    }
    case SystemKind::Beam: {
        const auto& p = spec.beam();
        doc["params"] = {{"span_A", p.span_A}, {"span_B", p.span_B}, {"radius_of_inertia", p.radius_of_inertia},
                         {"P", p.P}};
        break;
    }
    }
    return doc;
}

} // namespace fibgap
