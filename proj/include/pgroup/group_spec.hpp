#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pgroup/maximal_class.hpp"

namespace pgroup {

/// Tagged group descriptions, one JSON object per group:
///   {"type":"cyclic","n":9}
///   {"type":"abelian","invariants":[9,3]}
///   {"type":"unitriangular","n":3,"p":5}
///   {"type":"product","factors":[...]}
///   {"type":"example1","p":3,"r":4}            (optional "split":true)
///   {"type":"modular","p":3}
///   {"type":"extension","p":3,"invariants":[3,9],
///    "action":[[...],...],"cocycle":[...]}
/// Unknown type tags and unknown fields are rejected.
namespace group_spec {

inline void require_fields(const nlohmann::json& j, const std::vector<std::string>& required,
                           const std::vector<std::string>& optional = {}) {
    for (const auto& f : required)
        if (!j.contains(f)) throw std::invalid_argument("group spec: missing field \"" + f + "\"");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        bool known = key == "type";
        for (const auto& f : required) known = known || key == f;
        for (const auto& f : optional) known = known || key == f;
        if (!known) throw std::invalid_argument("group spec: unknown field \"" + key + "\"");
    }
}

inline nlohmann::json parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("group spec: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("group spec: expected an object with a \"type\" string");
    return j;
}

inline FiniteGroup build(const nlohmann::json& j, const Caps& caps = default_caps());

inline std::string display_name(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "cyclic") return "C" + std::to_string(j.at("n").get<std::uint64_t>());
    if (type == "abelian") {
        std::string s;
        for (const auto& d : j.at("invariants")) {
            if (!s.empty()) s += "x";
            s += "C" + std::to_string(d.get<std::uint64_t>());
        }
        return s;
    }
    if (type == "unitriangular")
        return "UT" + std::to_string(j.at("n").get<int>()) + "(F" + std::to_string(j.at("p").get<std::uint64_t>()) + ")";
    if (type == "product") {
        std::string s;
        for (const auto& f : j.at("factors")) {
            if (!s.empty()) s += "x";
            s += display_name(f);
        }
        return "(" + s + ")";
    }
    if (type == "example1") {
        std::string s = "G(" + std::to_string(j.at("p").get<std::uint64_t>()) + "," +
                        std::to_string(j.at("r").get<int>()) + ")";
        if (j.value("split", false)) s += "split";
        return s;
    }
    if (type == "modular") {
        const std::uint64_t p = j.at("p").get<std::uint64_t>();
        return "Mod" + std::to_string(p * p * p);
    }
    if (type == "extension") return "extension";
    return type;
}

inline FiniteGroup build(const nlohmann::json& j, const Caps& caps) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "cyclic") {
        require_fields(j, {"n"});
        return build_cyclic(j.at("n").get<std::uint64_t>(), caps);
    }
    if (type == "abelian") {
        require_fields(j, {"invariants"});
        return build_abelian(j.at("invariants").get<std::vector<std::uint64_t>>(), caps);
    }
    if (type == "unitriangular") {
        require_fields(j, {"n", "p"});
        return build_unitriangular(j.at("n").get<std::size_t>(), j.at("p").get<std::uint64_t>(), caps);
    }
    if (type == "product") {
        require_fields(j, {"factors"});
        std::vector<FiniteGroup> factors;
        for (const auto& f : j.at("factors")) factors.push_back(build(f, caps));
        return build_direct_product(factors, caps);
    }
    if (type == "example1") {
        require_fields(j, {"p", "r"}, {"split"});
        const std::uint64_t p = j.at("p").get<std::uint64_t>();
        const int r = j.at("r").get<int>();
        if (j.value("split", false)) return example1_split(p, r, caps);
        return construct_example1(p, r, caps).group;
    }
    if (type == "modular") {
        require_fields(j, {"p"});
        return build_modular(j.at("p").get<std::uint64_t>(), caps);
    }
    if (type == "extension") {
        require_fields(j, {"p", "invariants", "action", "cocycle"});
        ExtensionData d;
        d.p = j.at("p").get<std::uint64_t>();
        d.quotient_invariants = j.at("invariants").get<std::vector<std::uint64_t>>();
        const auto& rows = j.at("action");
        const std::size_t k = d.quotient_invariants.size();
        if (!rows.is_array() || rows.size() != k)
            throw std::invalid_argument("group spec: action must be a k x k integer matrix");
        d.action = IntMatrix(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!rows[i].is_array() || rows[i].size() != k)
                throw std::invalid_argument("group spec: action must be a k x k integer matrix");
            for (std::size_t c = 0; c < k; ++c) d.action(i, c) = rows[i][c].get<long long>();
        }
        d.cocycle_element = j.at("cocycle").get<std::vector<long long>>();
        return build_extension(d, caps);
    }
    throw std::invalid_argument("group spec: unknown type \"" + type + "\"");
}

inline nlohmann::json roundtrip(const nlohmann::json& j) { return parse(j.dump()); }

}  // namespace group_spec

}  // namespace pgroup
