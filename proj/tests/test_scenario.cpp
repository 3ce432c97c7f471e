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

#include "engres/runner.hpp"
#include "engres/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace engres {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error_path(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

TEST(ParseConfig, MemoryWithZeroDetuning) {
    const Scenario s = parse_config(R"({"name":"memory","params":{"delta1":0}})");
    EXPECT_EQ(s.kind, ScenarioKind::memory);
    const ModelParams p = resolve_params(s);
    EXPECT_NEAR(DerivedMemoryParams::from(p).chi, 0.0, 1e-15);
    EXPECT_EQ(p.omega2, 0.0);
}

TEST(ParseConfig, SweepOverGamma) {
    const Scenario s = parse_config(R"({"name":"sweep","sweep_axis":["gamma",[1,10,100]]})");
    ASSERT_TRUE(s.sweep_axis.has_value());
    EXPECT_EQ(s.sweep_axis->parameter, "gamma");
    EXPECT_EQ(s.sweep_axis->values, (std::vector<double>{1, 10, 100}));
    const RunResult r = run_scenario(s);
    EXPECT_EQ(r.summary["results"]["points"].size(), 3u);
    EXPECT_EQ(r.rows.size(), 3u);
}

TEST(ParseConfig, Rejections) {
    EXPECT_EQ(config_error_path(R"({"name":"nonadiabatic","params":{"omega2":-1}})"), "/params/omega2");
    EXPECT_EQ(config_error_path(R"({"name":"nonadiabatic","params":{"omgea2":1}})"), "/params/omgea2");
    EXPECT_EQ(config_error_path(R"({"name":"nonadiabatic","extra":1})"), "/extra");
    EXPECT_EQ(config_error_path(R"({"name":"bogus"})"), "/name");
    EXPECT_EQ(config_error_path(R"({"params":{}})"), "/name");
    EXPECT_EQ(config_error_path(R"({"name":"sweep","sweep_axis":["gamma",[]]})"), "/sweep_axis/1");
    EXPECT_EQ(config_error_path(R"({"name":"sweep","sweep_axis":["nope",[1]]})"), "/sweep_axis/0");
    EXPECT_EQ(config_error_path(R"({"name":"nonadiabatic","grid":{"samples":1}})"), "/grid/samples");
    EXPECT_EQ(config_error_path(R"({"name":"nonadiabatic","params":{"g":"big"}})"), "/params/g");
    // overflow is detected by the JSON reader, before any key is known
    EXPECT_EQ(config_error_path("{\"name\":\"nonadiabatic\",\"params\":{\"g\":1e999}}"), "");
    EXPECT_EQ(config_error_path("{not json"), "");
}

TEST(ParseConfig, RoundTrip) {
    std::vector<Scenario> cases;
    for (const auto& entry : fs::directory_iterator(ENGRES_SCENARIO_DIR)) {
        cases.push_back(parse_config(read_file(entry.path())));
    }
    Scenario custom;
    custom.kind = ScenarioKind::elimination_check;
    custom.params = {{"g", 1.5}, {"phi1", 0.1234567890123456789}};
    custom.t_end = 3.3;
    custom.samples = 17;
    custom.unit_scale = 1e3;
    custom.options.branch = Branch::memory;
    custom.options.rate_convention = RateConvention::as_printed;
    custom.options.gamma_model = GammaModel::none;
    custom.options.include_l_tl = true;
    cases.push_back(custom);
    ASSERT_GE(cases.size(), 8u);
    for (const Scenario& s : cases) {
        EXPECT_EQ(parse_config(serialize(s)), s) << serialize(s);
        EXPECT_EQ(serialize(parse_config(serialize(s))), serialize(s));
    }
}

TEST(ResolveParams, UnitScaleAndResonances) {
    const Scenario s = parse_config(R"({"name":"nonadiabatic","unit_scale":1e3,"params":{"g":2,"omega1":50,"omega2":5,"phi1":0.3,"n_max":3}})");
    const ModelParams p = resolve_params(s);
    EXPECT_DOUBLE_EQ(p.g, 2e3);
    EXPECT_DOUBLE_EQ(p.omega1, 5e4);
    EXPECT_DOUBLE_EQ(p.phi1, 0.3);
    EXPECT_EQ(p.n_max, 3);
    EXPECT_DOUBLE_EQ(p.delta2, -1e5);
    EXPECT_DOUBLE_EQ(p.delta_a, -5e3);
    EXPECT_DOUBLE_EQ(p.gamma, 1e2);  // defaults are already in s^-1
}

TEST(RunScenario, NonadiabaticDefaults) {
    const RunResult r = run_scenario(parse_config(R"({"name":"nonadiabatic"})"));
    EXPECT_NEAR(r.summary["regime"]["engineered_over_gamma"].get<double>(), 100.0, 1e-12);
    EXPECT_NEAR(r.summary["results"]["F_formula"].get<double>(), 1.0 - 3.0 / 806.0, 1e-12);
    EXPECT_NEAR(r.summary["results"]["F_formula"].get<double>(), 0.9963, 5e-5);
    EXPECT_EQ(r.summary["params"], params_to_json(resolve_params(r.scenario)));
    EXPECT_EQ(r.columns.front(), "t");
}

TEST(RunScenario, SweepFormulaColumn) {
    const RunResult r = run_scenario(parse_config(R"({"name":"sweep","sweep_axis":["rate_ratio",[1,10,100]]})"));
    const auto& pts = r.summary["results"]["points"];
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_NEAR(pts[0]["F_formula"].get<double>(), 1.0 - 1.0 / (2.0 + 8.0 / 3.0), 1e-12);
    EXPECT_NEAR(pts[1]["F_formula"].get<double>(), 0.9651, 5e-5);
    EXPECT_NEAR(pts[2]["F_formula"].get<double>(), 0.9963, 5e-5);
}

TEST(RunScenario, PhaseCycleDefaults) {
    const RunResult r = run_scenario(parse_config(R"({"name":"phase-cycle"})"));
    const ModelParams p;
    EXPECT_NEAR(r.summary["results"]["geometric"].get<double>(), -M_PI, 1e-6);
    EXPECT_NEAR(r.summary["results"]["dynamic"].get<double>(), -M_PI * p.omega2 / (2.0 * p.omega1), 1e-6);
}

TEST(RunScenario, Deterministic) {
    RunOptions two;
    two.workers = 3;
    for (const char* text : {R"({"name":"nonadiabatic"})", R"({"name":"sweep","sweep_axis":["gamma",[1,10,100]]})"}) {
        const Scenario s = parse_config(text);
        RunResult a = run_scenario(s);
        RunResult b = run_scenario(s, two);
        EXPECT_EQ(format_csv(a), format_csv(b));
        a.summary.erase("wall_time_s");
        b.summary.erase("wall_time_s");
        EXPECT_EQ(a.summary, b.summary);
    }
}

TEST(RunScenario, ShippedScenariosKeepInvariants) {
    for (const auto& entry : fs::directory_iterator(ENGRES_SCENARIO_DIR)) {
        const RunResult r = run_scenario(parse_config(read_file(entry.path())));
        EXPECT_TRUE(r.summary["invariants"]["ok"].get<bool>()) << entry.path();
        EXPECT_TRUE(r.summary.contains("params")) << entry.path();
        for (const auto& row : r.rows) EXPECT_EQ(row.size(), r.columns.size()) << entry.path();
    }
}

TEST(WriteOutputs, LayoutAndSchemas) {
    const fs::path root = fs::temp_directory_path() / "engres_test_scenario_out";
    fs::remove_all(root);
    const RunResult r = run_scenario(parse_config(R"({"name":"phase-cycle"})"));
    const fs::path dir = write_outputs(r, root);
    const fs::path dir2 = write_outputs(r, root);
    EXPECT_NE(dir, dir2);
    EXPECT_EQ(dir.parent_path(), root / "phase-cycle");
    for (const char* f : {"summary.json", "series.csv", "resolved_config.json"}) EXPECT_TRUE(fs::exists(dir / f));
    const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    EXPECT_EQ(summary["schema"], kSummarySchema);
    const auto cfg = nlohmann::json::parse(read_file(dir / "resolved_config.json"));
    EXPECT_EQ(cfg["schema"], kConfigSchema);
    EXPECT_EQ(read_file(dir / "series.csv").rfind(std::string("# ") + kSeriesSchema, 0), 0u);
    fs::remove_all(root);
}

}  // namespace
}  // namespace engres
