// Copyright 2026 The engres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "engres/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace engres {

using nlohmann::json;

namespace {

struct KindInfo {
    ScenarioKind kind;
    const char* name;
    const char* description;
};

const KindInfo kKinds[] = {
    {ScenarioKind::nonadiabatic, "nonadiabatic",
     "reduced engineered-reservoir dynamics and fidelity predictions, nonadiabatic branch"},
    {ScenarioKind::memory, "memory", "reduced dynamics and fidelity predictions, quantum-memory branch"},
    {ScenarioKind::interferometer, "interferometer", "three-level phase readout against an auxiliary level"},
    {ScenarioKind::effective_check, "effective-check", "full drive Hamiltonian versus the effective coupling"},
    {ScenarioKind::elimination_check, "elimination-check",
     "reduced equation versus the cavity model, TL marginal trace distance"},
    {ScenarioKind::phase_cycle, "phase-cycle", "geometric and dynamic phase over one protected-state cycle"},
    {ScenarioKind::sweep, "sweep", "fidelity predictions over a parameter or rate-ratio axis"},
};

// Keys whose values are rates or angular frequencies.
bool scaled_key(const std::string& key) { return key != "phi1" && key != "phi2" && key != "n_max"; }

bool nonnegative_key(const std::string& key) {
    return key == "g" || key == "omega1" || key == "omega2" || key == "cavity_decay" || key == "gamma";
}

double finite_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "number must be finite");
    return x;
}

void check_param_value(const std::string& key, double value, const std::string& path) {
    if (nonnegative_key(key) && value < 0.0) throw ConfigError(path, key + " must be >= 0");
    if (key == "n_max" && (value != std::floor(value) || value < 1.0 || value > 40.0)) {
        throw ConfigError(path, "n_max must be an integer in [1, 40]");
    }
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "expected an object");
}

template <typename Enum, std::size_t N>
Enum parse_enum(const json& v, const std::string& path, const std::pair<const char*, Enum> (&table)[N]) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    const auto s = v.get<std::string>();
    for (const auto& [name, value] : table) {
        if (s == name) return value;
    }
    throw ConfigError(path, "unknown value '" + s + "'");
}

const std::pair<const char*, Branch> kBranches[] = {{"nonadiabatic", Branch::nonadiabatic},
                                                    {"memory", Branch::memory}};
const std::pair<const char*, RateConvention> kConventions[] = {{"as_printed", RateConvention::as_printed},
                                                               {"elimination", RateConvention::elimination}};
const std::pair<const char*, GammaModel> kGammaModels[] = {{"none", GammaModel::none},
                                                           {"printed_bloch", GammaModel::printed_bloch},
                                                           {"rwa_oracle", GammaModel::rwa_oracle}};

bool branch_selectable(ScenarioKind k) {
    return k == ScenarioKind::effective_check || k == ScenarioKind::elimination_check || k == ScenarioKind::sweep;
}

void validate_resolved(const Scenario& s) {
    try {
        (void)resolve_params(s);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("/params", e.what());
    }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& k : kKinds) v.emplace_back(k.name);
        return v;
    }();
    return names;
}

std::string to_string(ScenarioKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k.name;
    }
    return "unknown";
}

std::string scenario_description(ScenarioKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k.description;
    }
    return "";
}

const std::vector<std::string>& parameter_keys() {
    static const std::vector<std::string> keys = {"g",      "omega1", "omega2",       "phi1",  "phi2", "delta_a",
                                                  "delta1", "delta2", "cavity_decay", "gamma", "n_max"};
    return keys;
}

Branch scenario_branch(const Scenario& s) {
    if (s.options.branch) return *s.options.branch;
    return s.kind == ScenarioKind::memory ? Branch::memory : Branch::nonadiabatic;
}

Scenario parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    } catch (const json::out_of_range& e) {
        throw ConfigError("", std::string("number out of range: ") + e.what());
    }
    require_object(doc, "");

    Scenario s;
    static const std::vector<std::string> top = {"name", "params", "grid", "sweep_axis", "unit_scale", "options"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(top.begin(), top.end(), key) == top.end()) throw ConfigError("/" + key, "unknown key");
    }

    if (!doc.contains("name")) throw ConfigError("/name", "missing scenario name");
    if (!doc["name"].is_string()) throw ConfigError("/name", "expected a string");
    const auto name = doc["name"].get<std::string>();
    const auto it = std::find_if(std::begin(kKinds), std::end(kKinds), [&](const KindInfo& k) { return name == k.name; });
    if (it == std::end(kKinds)) throw ConfigError("/name", "unknown scenario '" + name + "'");
    s.kind = it->kind;

    if (doc.contains("unit_scale")) {
        s.unit_scale = finite_number(doc["unit_scale"], "/unit_scale");
        if (!(s.unit_scale > 0.0)) throw ConfigError("/unit_scale", "must be positive");
    }

    if (doc.contains("params")) {
        require_object(doc["params"], "/params");
        for (const auto& [key, value] : doc["params"].items()) {
            const std::string path = "/params/" + key;
            const auto& keys = parameter_keys();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(path, "unknown parameter");
            const double x = finite_number(value, path);
            check_param_value(key, x, path);
            s.params[key] = x;
        }
    }

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        require_object(g, "/grid");
        for (const auto& [key, value] : g.items()) {
            if (key == "t_end") {
                const double t = finite_number(value, "/grid/t_end");
                if (!(t > 0.0)) throw ConfigError("/grid/t_end", "must be positive");
                s.t_end = t;
            } else if (key == "samples") {
                if (!value.is_number_integer()) throw ConfigError("/grid/samples", "expected an integer");
                const auto n = value.get<long long>();
                if (n < 2 || n > 1000000) throw ConfigError("/grid/samples", "must lie in [2, 1000000]");
                s.samples = static_cast<int>(n);
            } else {
                throw ConfigError("/grid/" + key, "unknown key");
            }
        }
    }

    if (doc.contains("options")) {
        const json& o = doc["options"];
        require_object(o, "/options");
        for (const auto& [key, value] : o.items()) {
            const std::string path = "/options/" + key;
            if (key == "include_l_tl") {
                if (!value.is_boolean()) throw ConfigError(path, "expected a boolean");
                s.options.include_l_tl = value.get<bool>();
            } else if (key == "branch") {
                if (!branch_selectable(s.kind)) throw ConfigError(path, "branch is fixed for this scenario");
                s.options.branch = parse_enum(value, path, kBranches);
            } else if (key == "rate_convention") {
                s.options.rate_convention = parse_enum(value, path, kConventions);
            } else if (key == "gamma_model") {
                s.options.gamma_model = parse_enum(value, path, kGammaModels);
            } else if (key == "initial") {
                if (!value.is_string() || (value != "up" && value != "down")) {
                    throw ConfigError(path, "expected \"up\" or \"down\"");
                }
                s.options.initial = value.get<std::string>();
            } else {
                throw ConfigError(path, "unknown key");
            }
        }
    }
    if (s.options.gamma_model == GammaModel::printed_bloch && scenario_branch(s) == Branch::memory) {
        throw ConfigError("/options/gamma_model", "printed_bloch applies to the nonadiabatic branch only");
    }

    if (doc.contains("sweep_axis")) {
        if (s.kind != ScenarioKind::sweep) throw ConfigError("/sweep_axis", "only sweep scenarios take a sweep axis");
        const json& a = doc["sweep_axis"];
        if (!a.is_array() || a.size() != 2) throw ConfigError("/sweep_axis", "expected [name, [values...]]");
        if (!a[0].is_string()) throw ConfigError("/sweep_axis/0", "expected a parameter name");
        SweepAxis axis;
        axis.parameter = a[0].get<std::string>();
        const auto& keys = parameter_keys();
        if (axis.parameter != "rate_ratio" && std::find(keys.begin(), keys.end(), axis.parameter) == keys.end()) {
            throw ConfigError("/sweep_axis/0", "unknown sweep parameter '" + axis.parameter + "'");
        }
        if (!a[1].is_array() || a[1].empty()) throw ConfigError("/sweep_axis/1", "expected a nonempty array");
        for (std::size_t i = 0; i < a[1].size(); ++i) {
            const std::string path = "/sweep_axis/1/" + std::to_string(i);
            const double x = finite_number(a[1][i], path);
            if (axis.parameter == "rate_ratio") {
                if (!(x > 0.0)) throw ConfigError(path, "rate ratio must be positive");
            } else {
                check_param_value(axis.parameter, x, path);
            }
            axis.values.push_back(x);
        }
        s.sweep_axis = std::move(axis);
    }

    validate_resolved(s);
    if (s.sweep_axis && s.sweep_axis->parameter != "rate_ratio") {
        for (std::size_t i = 0; i < s.sweep_axis->values.size(); ++i) {
            try {
                (void)resolve_params(s, {{s.sweep_axis->parameter, s.sweep_axis->values[i]}});
            } catch (const Error& e) {
                throw ConfigError("/sweep_axis/1/" + std::to_string(i), e.what());
            }
        }
    }
    return s;
}

json to_json(const Scenario& s) {
    json j;
    j["name"] = to_string(s.kind);
    j["params"] = json::object();
    for (const auto& [k, v] : s.params) {
        if (k == "n_max") {
            j["params"][k] = static_cast<int>(v);
        } else {
            j["params"][k] = v;
        }
    }
    if (s.t_end || s.samples) {
        j["grid"] = json::object();
        if (s.t_end) j["grid"]["t_end"] = *s.t_end;
        if (s.samples) j["grid"]["samples"] = *s.samples;
    }
    if (s.sweep_axis) j["sweep_axis"] = json::array({s.sweep_axis->parameter, s.sweep_axis->values});
    j["unit_scale"] = s.unit_scale;
    json o;
    o["include_l_tl"] = s.options.include_l_tl;
    if (s.options.branch) o["branch"] = to_string(*s.options.branch);
    o["rate_convention"] = to_string(s.options.rate_convention);
    o["gamma_model"] = to_string(s.options.gamma_model);
    o["initial"] = s.options.initial;
    j["options"] = o;
    return j;
}

std::string serialize(const Scenario& s) { return to_json(s).dump(2); }

ModelParams resolve_params(const Scenario& s, const std::map<std::string, double>& extra) {
    std::map<std::string, double> values = s.params;
    for (const auto& [k, v] : extra) values[k] = v;

    ModelParams p;
    for (const auto& [key, raw] : values) {
        const double v = scaled_key(key) ? raw * s.unit_scale : raw;
        if (key == "g") p.g = v;
        else if (key == "omega1") p.omega1 = v;
        else if (key == "omega2") p.omega2 = v;
        else if (key == "phi1") p.phi1 = v;
        else if (key == "phi2") p.phi2 = v;
        else if (key == "delta_a") p.delta_a = v;
        else if (key == "delta1") p.delta1 = v;
        else if (key == "delta2") p.delta2 = v;
        else if (key == "cavity_decay") p.cavity_decay = v;
        else if (key == "gamma") p.gamma = v;
        else if (key == "n_max") p.n_max = static_cast<int>(v);
        else throw ConfigError("/params/" + key, "unknown parameter");
    }

    auto given = [&values](const char* key) { return values.count(key) != 0; };
    if (scenario_branch(s) == Branch::nonadiabatic) {
        if (!given("delta2")) p.delta2 = -2.0 * p.omega1;
        if (!given("delta_a")) p.delta_a = -p.omega2;
    } else {
        if (!given("omega2")) p.omega2 = 0.0;
        if (!given("delta_a")) {
            p.delta_a = -2.0 * std::sqrt(p.omega1 * p.omega1 + 0.25 * p.delta1 * p.delta1);
        }
        if (!(p.omega1 > 0.0 || p.delta1 != 0.0)) throw ConfigError("/params", "memory branch needs omega1 or delta1");
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError("/params", e.what());
    }
    return p;
}

json params_to_json(const ModelParams& p) {
    return json{{"g", p.g},
                {"omega1", p.omega1},
                {"omega2", p.omega2},
                {"phi1", p.phi1},
                {"phi2", p.phi2},
                {"delta_a", p.delta_a},
                {"delta1", p.delta1},
                {"delta2", p.delta2},
                {"cavity_decay", p.cavity_decay},
                {"gamma", p.gamma},
                {"n_max", p.n_max}};
}

}  // namespace engres
