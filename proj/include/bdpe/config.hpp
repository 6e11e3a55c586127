#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdpe/chain.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/mm1m.hpp"
#include "bdpe/model.hpp"

namespace bdpe {

struct ParsedConfig {
    BirthDeathModel<double> model;
    TruncationPolicy policy;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(std::string("missing or non-numeric field \"") + key + "\"");
    return j[key].get<double>();
}

inline std::vector<double> require_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw ConfigError(std::string("missing or non-array field \"") + key + "\"");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline ParsedConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw ConfigError("config must be an object with a string \"kind\"");
    const std::string kind = doc["kind"].get<std::string>();
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    const nlohmann::json cost = doc.value("cost", nlohmann::json::object());

    ParsedConfig out;
    if (kind == "mm1m") {
        out.model = make_mm1m_analytic(detail::require_number(params, "lambda"),
                                       detail::require_number(params, "mu"),
                                       detail::require_number(params, "theta"));
    } else if (kind == "mserver-balk-abandon") {
        const double holding = cost.value("holding_linear", 0.0);
        std::vector<double> balk;
        if (params.contains("balk")) balk = detail::require_array(params, "balk");
        try {
            out.model = make_mserver_balk_abandon<double>(
                detail::require_number(params, "lambda"), int(detail::require_number(params, "servers")),
                detail::require_number(params, "mu"), detail::require_number(params, "theta"),
                params.value("abandon_in_service", true), cost.value("abandon", 1.0),
                [holding](state_t n) { return holding * double(n); }, std::move(balk));
        } catch (const RateDomainError& e) {
            throw ConfigError(e.what());
        }
    } else if (kind == "linear-immigration") {
        const double a = cost.value("linear", 1.0);
        const double b = cost.value("quadratic", 0.0);
        try {
            out.model = make_linear_immigration<double>(
                detail::require_number(params, "lambda"), detail::require_number(params, "alpha"),
                detail::require_number(params, "mu"),
                [a, b](state_t n) { return a * double(n) + b * double(n) * double(n); });
        } catch (const RateDomainError& e) {
            throw ConfigError(e.what());
        }
    } else if (kind == "tabulated") {
        out.model = make_tabulated<double>(detail::require_array(params, "lambda"),
                                           detail::require_array(params, "mu"),
                                           detail::require_array(cost, "values"));
    } else {
        throw ConfigError("unknown model kind \"" + kind + "\"");
    }

    if (doc.contains("truncation")) {
        const nlohmann::json& tr = doc["truncation"];
        if (!tr.is_object()) throw ConfigError("\"truncation\" must be an object");
        out.policy.tail_mass_tol = tr.value("tail_mass_tol", out.policy.tail_mass_tol);
        out.policy.term_rel_tol = tr.value("term_rel_tol", out.policy.term_rel_tol);
        out.policy.max_states = tr.value("max_states", out.policy.max_states);
        try {
            out.policy.validate();
        } catch (const ConfigError&) {
            throw;
        }
    }
    return out;
}

inline ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

}  // namespace bdpe
