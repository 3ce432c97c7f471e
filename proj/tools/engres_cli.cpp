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

// Command-line front end: run, validate and list scenarios.

#include "engres/error.hpp"
#include "engres/runner.hpp"
#include "engres/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitRegime = 4;

int report(int code, const std::string& kind, const std::string& message, const std::string& path = {}) {
    nlohmann::json err{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!path.empty()) err["path"] = path;
    std::cerr << err.dump() << std::endl;
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw engres::ConfigError("", "cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engineered-reservoir ion/cavity simulations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = 1;
    bool verbose = false;

    auto* run = app.add_subcommand("run", "run a scenario and write summary.json, series.csv, resolved_config.json");
    run->add_option("config", config_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output root directory");
    run->add_option("--workers", workers, "concurrent sweep points")->check(CLI::Range(1, 256));
    run->add_flag("--verbose", verbose, "progress messages on stderr");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a scenario without running it");
    validate->add_option("config", validate_path, "scenario JSON file")->required();

    auto* list = app.add_subcommand("list-scenarios", "list scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report(kExitConfig, "usage", e.what());
    }

    try {
        if (*list) {
            for (const auto& name : engres::scenario_names()) {
                std::size_t i = &name - engres::scenario_names().data();
                std::cout << name << "\t"
                          << engres::scenario_description(static_cast<engres::ScenarioKind>(i)) << "\n";
            }
            return kExitOk;
        }
        if (*validate) {
            const engres::Scenario s = engres::parse_config(read_file(validate_path));
            std::cout << engres::serialize(s) << std::endl;
            return kExitOk;
        }
        const engres::Scenario s = engres::parse_config(read_file(config_path));
        engres::RunOptions opts;
        opts.workers = workers;
        if (verbose) opts.log = [](const std::string& m) { std::cerr << m << std::endl; };
        const engres::RunResult r = engres::run_scenario(s, opts);
        const auto dir = engres::write_outputs(r, out_dir);
        std::cout << dir.string() << std::endl;
        return kExitOk;
    } catch (const engres::ConfigError& e) {
        return report(kExitConfig, "config", e.what(), e.path());
    } catch (const engres::RegimeError& e) {
        return report(kExitRegime, "regime", e.what());
    } catch (const engres::Error& e) {
        return report(kExitNumerical, "numerical", e.what());
    } catch (const std::exception& e) {
        return report(kExitNumerical, "internal", e.what());
    }
}
