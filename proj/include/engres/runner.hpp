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

// Scenario execution and output files.

#include "engres/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace engres {

inline constexpr const char* kSummarySchema = "engres.summary/1";
inline constexpr const char* kSeriesSchema = "engres.series/1";
inline constexpr const char* kConfigSchema = "engres.config/1";

struct RunOptions {
    int workers = 1;  // sweep points evaluated concurrently
    std::function<void(const std::string&)> log;
};

struct RunResult {
    Scenario scenario;
    nlohmann::json summary;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json resolved_config;
};

// Runs the scenario in memory. Module errors propagate unchanged.
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

std::string format_csv(const RunResult& r);

// Writes summary.json, series.csv and resolved_config.json under
// <out_root>/<scenario>/<UTC timestamp>/ and returns that directory.
std::filesystem::path write_outputs(const RunResult& r, const std::filesystem::path& out_root);

}  // namespace engres
