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

#pragma once

// Scenario configuration: parsing, validation, canonical serialization and
// resolution into model parameters.

#include "engres/error.hpp"
#include "engres/model.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace engres {

enum class ScenarioKind {
    nonadiabatic,
    memory,
    interferometer,
    effective_check,
    elimination_check,
    phase_cycle,
    sweep,
};

const std::vector<std::string>& scenario_names();
std::string to_string(ScenarioKind kind);
std::string scenario_description(ScenarioKind kind);

// Configuration problem; path is a JSON pointer to the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct SweepAxis {
    std::string parameter;  // a params key or "rate_ratio"
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct ScenarioOptions {
    bool include_l_tl = false;
    std::optional<Branch> branch;  // memory-capable scenarios only
    RateConvention rate_convention = RateConvention::elimination;
    GammaModel gamma_model = GammaModel::rwa_oracle;
    std::string initial = "up";  // effective-check: "up" or "down"

    bool operator==(const ScenarioOptions&) const = default;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::nonadiabatic;
    std::map<std::string, double> params;  // overrides exactly as written
    std::optional<double> t_end;           // in units of 1/unit_scale seconds
    std::optional<int> samples;
    std::optional<SweepAxis> sweep_axis;
    double unit_scale = 1.0;
    ScenarioOptions options;

    bool operator==(const Scenario&) const = default;
};

const std::vector<std::string>& parameter_keys();

// Throws ConfigError for malformed JSON, unknown keys, wrong types,
// non-finite numbers and values that break parameter invariants.
Scenario parse_config(const std::string& text);
nlohmann::json to_json(const Scenario& s);
std::string serialize(const Scenario& s);

// Defaults, overrides scaled by unit_scale, then the detunings left unset are
// placed on the branch's resonance conditions. Throws ConfigError.
ModelParams resolve_params(const Scenario& s, const std::map<std::string, double>& extra = {});

nlohmann::json params_to_json(const ModelParams& p);

Branch scenario_branch(const Scenario& s);

}  // namespace engres
