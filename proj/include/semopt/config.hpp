// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The semopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMOPT_CONFIG_HPP
#define SEMOPT_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semopt/comp_load.hpp"
#include "semopt/orchestrator.hpp"
#include "semopt/scenario.hpp"

namespace semopt {

/// Malformed configuration: parse errors, unknown keys, wrong types.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario fields shared by every seed; channels are drawn per seed.
struct ScenarioTemplate {
    int num_users = 4;
    int num_antennas = 8;
    double bandwidth_hz = 10e6;
    double noise_power_dbm = -60.0;
    double max_power_dbm = 30.0;
    double comp_power_coeff = 1.0;
    std::vector<double> min_semantic_rate_bps; // empty: all zero
    std::vector<double> min_ratio;             // empty: C_D
    std::vector<double> path_loss_db;          // empty: none
};

inline const std::vector<std::string>& sweep_parameters()
{
    static const std::vector<std::string> names{"comp_power_coeff", "max_power_dbm", "bandwidth_hz",
                                                "noise_power_dbm"};
    return names;
}

struct ExperimentSpec {
    std::vector<Scheme> schemes{Scheme::psc_rsma, Scheme::psc_sdma, Scheme::non_semantic};
    std::string sweep_parameter; // empty: no sweep
    std::vector<double> sweep_values;
    std::vector<std::uint64_t> seeds{7};
};

struct Config {
    ScenarioTemplate scenario;
    CompLoadSpec comp_load;
    ExperimentSpec experiment;
    OrchestratorOptions options;
};

/// Substitutes one swept parameter.
inline void apply_parameter(ScenarioTemplate& t, const std::string& name, double value)
{
    if (name == "comp_power_coeff")
        t.comp_power_coeff = value;
    else if (name == "max_power_dbm")
        t.max_power_dbm = value;
    else if (name == "bandwidth_hz")
        t.bandwidth_hz = value;
    else if (name == "noise_power_dbm")
        t.noise_power_dbm = value;
    else
        throw ConfigError("unknown sweep parameter '" + name + "'");
}

/// Validated scenario for one seed: i.i.d. CN(0,1) channels from `seed`, then
/// the configured path loss.
inline Scenario make_scenario(const ScenarioTemplate& t, const CompLoadSpec& spec, std::uint64_t seed)
{
    Scenario s;
    s.num_users = t.num_users;
    s.num_antennas = t.num_antennas;
    s.bandwidth_hz = t.bandwidth_hz;
    s.noise_power_w = dbm_to_watts(t.noise_power_dbm);
    s.max_power_w = dbm_to_watts(t.max_power_dbm);
    s.comp_power_coeff = t.comp_power_coeff;
    const auto k = static_cast<std::size_t>(std::max(t.num_users, 0));
    s.min_semantic_rate_bps = t.min_semantic_rate_bps.empty() ? std::vector<double>(k, 0.0) : t.min_semantic_rate_bps;
    s.min_ratio = t.min_ratio.empty() ? std::vector<double>(k, spec.domain_floor()) : t.min_ratio;
    if (t.num_users > 0 && t.num_antennas > 0) {
        s.channels = generate_channels(t.num_users, t.num_antennas, seed);
        apply_path_loss(s.channels, t.path_loss_db);
    }
    return validate_scenario(s);
}

/// Parses "a..b" (inclusive) or a single integer.
inline std::vector<std::uint64_t> parse_seed_range(const std::string& text)
{
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const auto v = std::stoull(text, &used);
            if (used != text.size())
                throw ConfigError("");
            return {v};
        }
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const auto lo = std::stoull(a, &used);
        if (used != a.size())
            throw ConfigError("");
        const auto hi = std::stoull(b, &used);
        if (used != b.size() || hi < lo)
            throw ConfigError("");
        std::vector<std::uint64_t> out;
        for (auto v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("invalid seed range '" + text + "' (expected N or N..M)");
    }
}

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown(const Json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + where + "." + key + "'");
}

template <typename T>
void read(const Json& obj, const std::string& where, const char* key, T& out)
{
    if (!obj.contains(key))
        return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

// A number is broadcast to every user later; an array is taken as is.
inline void read_per_user(const Json& obj, const std::string& where, const char* key, int users,
                          std::vector<double>& out)
{
    if (!obj.contains(key))
        return;
    const Json& v = obj.at(key);
    if (v.is_number())
        out.assign(static_cast<std::size_t>(std::max(users, 0)), v.get<double>());
    else
        read(obj, where, key, out);
}

} // namespace detail

/// Parses configuration text. Omitted fields keep their defaults; unknown keys
/// are errors. The scenario is validated against seed 0's channels.
inline Config parse_config(const std::string& text, const std::vector<std::string>& overrides = {})
{
    using detail::Json;
    Json root;
    try {
        root = text.empty() ? Json::object() : Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + o + "' is not key=value");
        const std::string path = o.substr(0, eq), raw = o.substr(eq + 1);
        Json value;
        try {
            value = Json::parse(raw);
        } catch (const nlohmann::json::parse_error&) {
            value = raw;
        }
        Json* node = &root;
        std::stringstream parts(path);
        std::string part;
        std::vector<std::string> keys;
        while (std::getline(parts, part, '.'))
            keys.push_back(part);
        for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
            if (!node->is_object())
                throw ConfigError("override '" + path + "' descends into a non-object");
            node = &(*node)[keys[i]];
        }
        if (keys.empty() || keys.back().empty())
            throw ConfigError("override '" + o + "' has an empty key");
        (*node)[keys.back()] = value;
    }

    Config c;
    detail::reject_unknown(root, "config", {"scenario", "comp_load", "experiment"});
    if (root.contains("scenario")) {
        const Json& s = root["scenario"];
        detail::reject_unknown(s, "scenario",
                               {"num_users", "num_antennas", "bandwidth_hz", "noise_power_dbm", "max_power_dbm",
                                "comp_power_coeff", "min_semantic_rate_bps", "min_ratio", "path_loss_db"});
        auto& t = c.scenario;
        detail::read(s, "scenario", "num_users", t.num_users);
        detail::read(s, "scenario", "num_antennas", t.num_antennas);
        detail::read(s, "scenario", "bandwidth_hz", t.bandwidth_hz);
        detail::read(s, "scenario", "noise_power_dbm", t.noise_power_dbm);
        detail::read(s, "scenario", "max_power_dbm", t.max_power_dbm);
        detail::read(s, "scenario", "comp_power_coeff", t.comp_power_coeff);
        detail::read_per_user(s, "scenario", "min_semantic_rate_bps", t.num_users, t.min_semantic_rate_bps);
        detail::read_per_user(s, "scenario", "min_ratio", t.num_users, t.min_ratio);
        detail::read(s, "scenario", "path_loss_db", t.path_loss_db);
    }
    c.comp_load = default_comp_load();
    if (root.contains("comp_load")) {
        const Json& l = root["comp_load"];
        detail::reject_unknown(l, "comp_load", {"slopes", "intercepts", "boundaries"});
        detail::read(l, "comp_load", "slopes", c.comp_load.slopes);
        detail::read(l, "comp_load", "intercepts", c.comp_load.intercepts);
        detail::read(l, "comp_load", "boundaries", c.comp_load.boundaries);
    }
    c.comp_load = validate_spec(c.comp_load);

    if (root.contains("experiment")) {
        const Json& e = root["experiment"];
        detail::reject_unknown(e, "experiment",
                               {"schemes", "seeds", "sweep", "initial_ratios", "tol_outer", "max_outer", "tol_sca",
                                "max_sca_iters"});
        auto& x = c.experiment;
        if (e.contains("schemes")) {
            std::vector<std::string> names;
            detail::read(e, "experiment", "schemes", names);
            x.schemes.clear();
            for (const auto& n : names) {
                try {
                    x.schemes.push_back(scheme_from_string(n));
                } catch (const std::invalid_argument& err) {
                    throw ConfigError(std::string("experiment.schemes: ") + err.what());
                }
            }
        }
        if (e.contains("seeds")) {
            const Json& sd = e["seeds"];
            if (sd.is_string())
                x.seeds = parse_seed_range(sd.get<std::string>());
            else
                detail::read(e, "experiment", "seeds", x.seeds);
        }
        if (e.contains("sweep")) {
            const Json& w = e["sweep"];
            detail::reject_unknown(w, "experiment.sweep", {"parameter", "values"});
            detail::read(w, "experiment.sweep", "parameter", x.sweep_parameter);
            detail::read(w, "experiment.sweep", "values", x.sweep_values);
        }
        std::string init = "rate_proxy";
        detail::read(e, "experiment", "initial_ratios", init);
        if (init == "rate_proxy")
            c.options.initial_ratios = InitialRatios::rate_proxy;
        else if (init == "unit")
            c.options.initial_ratios = InitialRatios::unit;
        else
            throw ConfigError("experiment.initial_ratios: expected 'rate_proxy' or 'unit'");
        detail::read(e, "experiment", "tol_outer", c.options.tol_outer);
        detail::read(e, "experiment", "max_outer", c.options.max_outer);
        detail::read(e, "experiment", "tol_sca", c.options.sca.tol_sca);
        detail::read(e, "experiment", "max_sca_iters", c.options.sca.max_sca_iters);
    }

    const auto& x = c.experiment;
    std::vector<std::string> bad;
    if (x.schemes.empty())
        bad.emplace_back("experiment.schemes: must be nonempty");
    if (x.seeds.empty())
        bad.emplace_back("experiment.seeds: must be nonempty");
    if (!x.sweep_parameter.empty()) {
        bool known = false;
        for (const auto& n : sweep_parameters())
            known = known || n == x.sweep_parameter;
        if (!known)
            bad.push_back("experiment.sweep.parameter: unknown '" + x.sweep_parameter + "'");
        if (x.sweep_values.empty())
            bad.emplace_back("experiment.sweep.values: must be nonempty");
        for (std::size_t i = 1; i < x.sweep_values.size(); ++i)
            if (!(x.sweep_values[i] > x.sweep_values[i - 1]))
                bad.emplace_back("experiment.sweep.values: must be strictly increasing");
    }
    if (!(c.options.tol_outer > 0.0) || c.options.max_outer < 1)
        bad.emplace_back("experiment.tol_outer/max_outer: must be positive");
    if (!(c.options.sca.tol_sca > 0.0) || c.options.sca.max_sca_iters < 1)
        bad.emplace_back("experiment.tol_sca/max_sca_iters: must be positive");
    if (!bad.empty())
        throw ValidationError(bad);
    make_scenario(c.scenario, c.comp_load, x.seeds.front()); // throws ValidationError
    return c;
}

inline Config load_config(const std::string& path, const std::vector<std::string>& overrides = {})
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

} // namespace semopt

#endif // SEMOPT_CONFIG_HPP
