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

#include "engres/interferometry.hpp"
#include "engres/lindblad.hpp"
#include "engres/model.hpp"
#include "engres/phase.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

namespace engres {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Trace, Hermiticity and positivity bounds checked on every trajectory.
constexpr double kTraceBound = 1e-9;
constexpr double kHermiticityBound = 1e-9;
constexpr double kPositivityBound = -1e-7;

struct InvariantTally {
    double max_trace_drift = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 1.0;
    int trajectories = 0;

    void add(const IntegrationStats& s) {
        max_trace_drift = std::max(max_trace_drift, s.max_trace_drift);
        max_hermiticity_error = std::max(max_hermiticity_error, s.max_hermiticity_error);
        min_eigenvalue = std::min(min_eigenvalue, s.min_eigenvalue);
        ++trajectories;
    }

    json to_json() const {
        const bool ok = max_trace_drift <= kTraceBound && max_hermiticity_error <= kHermiticityBound &&
                        min_eigenvalue >= kPositivityBound;
        return json{{"trajectories", trajectories},
                    {"max_trace_drift", max_trace_drift},
                    {"max_hermiticity_error", max_hermiticity_error},
                    {"min_eigenvalue", trajectories > 0 ? min_eigenvalue : kNaN},
                    {"ok", ok}};
    }
};

// NaN and infinity serialize as null but compare unequal, so store real nulls.
void null_non_finite(json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        j = nullptr;
    } else if (j.is_structured()) {
        for (auto& child : j) null_non_finite(child);
    }
}

json stats_json(const IntegrationStats& s) {
    return json{{"step", s.step},
                {"substeps", s.substeps},
                {"refinements", s.refinements},
                {"refinement_change", s.refinement_change}};
}

json regime_json(const RegimeReport& r) {
    json c = json::array();
    for (const auto& k : r.constraints) {
        c.push_back({{"name", k.name},
                     {"value", k.value},
                     {"target", k.target},
                     {"residual", k.residual},
                     {"satisfied", k.satisfied}});
    }
    return json{{"branch", to_string(r.branch)},
                {"satisfied", r.satisfied()},
                {"constraints", c},
                {"omega1_over_omega2", r.omega1_over_omega2},
                {"omega2_over_g", r.omega2_over_g},
                {"decay_over_g", r.decay_over_g},
                {"engineered_over_gamma", r.engineered_over_gamma}};
}

void check_fidelity(double f, const char* name) {
    if (!(f >= -1e-12 && f <= 1.0 + 1e-8)) {
        throw DomainError(std::string("fidelity '") + name + "' outside [0, 1]: " + std::to_string(f));
    }
}

std::vector<double> uniform_grid(double t_end, int samples) {
    std::vector<double> g(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) g[k] = k == samples - 1 ? t_end : t_end * k / (samples - 1);
    return g;
}

double grid_end(const Scenario& s, double fallback) { return s.t_end ? *s.t_end / s.unit_scale : fallback; }

int grid_samples(const Scenario& s, int fallback) { return s.samples ? *s.samples : fallback; }

double ratio_or_inf(double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

// Population of the protected dressed state (index 0) in a steady state.
double steady_fidelity(const MasterEquation& me) { return steady_state(me).rho(0, 0).real(); }

json printed_coefficients() {
    return json{{"source", 3.0 / 8.0}, {"loss", 6.0 / 4.0}, {"coherence", 5.0 / 4.0}, {"cross", 1.0 / 8.0}};
}

json oracle_coefficients(const ModelParams& p, Branch branch) {
    ModelParams unit = p;
    unit.gamma = 1.0;
    const DressedRates r = dressed_rates(averaged_emission_generator(unit, branch));
    return json{{"source", r.source},
                {"loss", r.source + r.loss_up},
                {"coherence", r.coherence},
                {"cross", r.cross},
                {"frequency_shift", r.frequency_shift}};
}

// --- reduced-model scenarios ---------------------------------------------------------

void run_reduced(const Scenario& s, const ModelParams& p, RunResult& out, InvariantTally& tally) {
    const Branch branch = scenario_branch(s);
    const double rate = engineered_rate(p, branch);
    const double ratio = ratio_or_inf(rate, p.gamma);
    const double eps = epsilon_closed_form(ratio, branch);
    json& res = out.summary["results"];
    res["engineered_rate"] = rate;
    res["rate_ratio"] = ratio;
    res["epsilon"] = eps;
    res["F_formula"] = 1.0 - eps;

    const double f_oracle =
        steady_fidelity(reduced_master_equation(p, branch, GammaModel::rwa_oracle, RateConvention::elimination));
    const double f_oracle_printed =
        steady_fidelity(reduced_master_equation(p, branch, GammaModel::rwa_oracle, RateConvention::as_printed));
    check_fidelity(f_oracle, "F_oracle");
    check_fidelity(f_oracle_printed, "F_oracle_as_printed");
    res["F_oracle"] = f_oracle;
    res["F_oracle_as_printed"] = f_oracle_printed;
    res["oracle_coefficients_per_gamma"] = oracle_coefficients(p, branch);

    if (branch == Branch::nonadiabatic) {
        const double f_ode = steady_fidelity(reduced_master_equation(p, branch, GammaModel::printed_bloch));
        check_fidelity(f_ode, "F_printed_ode");
        res["F_printed_ode"] = f_ode;
        res["printed_coefficients_per_gamma"] = printed_coefficients();
        res["asymptotic_fidelity"] = fidelity(asymptotic_state(branch, eps), Ket::basis(2, 0));
    } else {
        const auto d = DerivedMemoryParams::from(p);
        res["lambda"] = d.lambda;
        res["chi"] = d.chi;
        res["g_tilde"] = d.g_tilde;
        try {
            const DensityMatrix rho = asymptotic_state(branch, eps);
            res["asymptotic_fidelity"] = fidelity(rho, Ket::basis(2, 0));
            res["asymptotic_state_valid"] = true;
        } catch (const DomainError& e) {
            res["asymptotic_fidelity"] = nullptr;
            res["asymptotic_state_valid"] = false;
            res["asymptotic_state_error"] = e.what();
        }
        const DensityMatrix oracle =
            steady_state(reduced_master_equation(p, branch, GammaModel::rwa_oracle, RateConvention::elimination)).rho;
        res["oracle_steady_offdiagonal"] = json{{"re", oracle(0, 1).real()}, {"im", oracle(0, 1).imag()}};
    }

    const MasterEquation me = reduced_master_equation(p, branch, s.options.gamma_model, s.options.rate_convention);
    const double selected = steady_fidelity(me);
    check_fidelity(selected, "F_selected_model");
    res["F_selected_model"] = selected;
    res["gamma_model"] = to_string(s.options.gamma_model);
    res["rate_convention"] = to_string(s.options.rate_convention);

    const auto grid = uniform_grid(grid_end(s, 10.0 / rate), grid_samples(s, 201));
    const Trajectory traj = evolve(me, DensityMatrix::pure(Ket::basis(2, 1)), grid);
    tally.add(traj.stats);
    out.summary["integration"] = stats_json(traj.stats);
    res["final_fidelity"] = traj.states.back()(0, 0).real();

    out.columns = {"t", "rho_11", "rho_22", "re_rho_12", "im_rho_12", "fidelity"};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& r = traj.states[k];
        out.rows.push_back({grid[k], r(0, 0).real(), r(1, 1).real(), r(0, 1).real(), r(0, 1).imag(), r(0, 0).real()});
    }
}

// --- interferometer ------------------------------------------------------------------

void run_interferometer_scenario(const Scenario& s, const ModelParams& p, RunResult& out, InvariantTally& tally) {
    ThreeLevelConfig cfg;
    cfg.params = p;
    cfg.include_l_tl = s.options.include_l_tl;
    cfg.t_end = grid_end(s, 0.0);
    cfg.samples = grid_samples(s, 401);
    const InterferometerResult r = run_interferometer(cfg);
    tally.add(r.trajectory.stats);

    json& res = out.summary["results"];
    res["slope"] = r.slope;
    res["expected_slope"] = r.expected_slope;
    res["slope_relative_error"] = std::abs(r.slope - r.expected_slope) / r.expected_slope;
    res["reference_frequency"] = r.reference_frequency;
    res["reference_over_slope"] = r.reference_frequency / r.slope;
    res["max_probability_error"] = r.max_probability_error;
    res["coherence_decay_first_cycle"] = r.coherence_decay_first_cycle;
    res["include_l_tl"] = s.options.include_l_tl;
    double aa_dev = 0.0;
    for (double v : r.rho_aa) aa_dev = std::max(aa_dev, std::abs(v - 0.5));
    res["max_rho_aa_deviation"] = aa_dev;
    out.summary["integration"] = stats_json(r.trajectory.stats);

    out.columns = {"t", "rho_aa", "rho_up", "rho_down", "re_c", "im_c", "phase", "p_ea_reference"};
    for (std::size_t k = 0; k < r.trajectory.times.size(); ++k) {
        out.rows.push_back({r.trajectory.times[k], r.rho_aa[k], r.rho_up[k], r.rho_down[k], r.coherence[k].real(),
                            r.coherence[k].imag(), r.phase[k], r.reference[k]});
    }
}

// --- effective / elimination checks --------------------------------------------------

void run_effective_check(const Scenario& s, const ModelParams& p, RunResult& out) {
    const Branch branch = scenario_branch(s);
    const Index nf = p.n_max + 1;
    const Ket psi0 = Ket::basis(2 * nf, s.options.initial == "up" ? 0 : nf);
    if (!(p.g > 0.0) && !s.t_end) throw DomainError("effective-check needs g > 0 or an explicit t_end");
    const double horizon = grid_end(s, 2.0 / p.g);
    const EffectiveComparison c = compare_effective_model(p, branch, psi0, horizon, grid_samples(s, 201));
    for (double f : c.fidelity) check_fidelity(f, "effective fidelity");
    json& res = out.summary["results"];
    res["worst_fidelity"] = c.worst_fidelity;
    res["horizon"] = horizon;
    res["initial"] = s.options.initial;
    out.columns = {"t", "fidelity"};
    for (std::size_t k = 0; k < c.times.size(); ++k) out.rows.push_back({c.times[k], c.fidelity[k]});
}

void run_elimination_check(const Scenario& s, const ModelParams& p, RunResult& out, InvariantTally& tally) {
    const Branch branch = scenario_branch(s);
    const double rate = engineered_rate(p, branch);
    const Ket tl = Ket::normalize(Vector::Ones(2));
    const double horizon = grid_end(s, 10.0 / rate);
    const int samples = grid_samples(s, 201);
    const auto elim = compare_elimination(p, branch, tl, RateConvention::elimination, horizon, samples);
    const auto literal = compare_elimination(p, branch, tl, RateConvention::as_printed, horizon, samples);
    for (const auto* c : {&elim, &literal}) {
        tally.add(c->full_stats);
        tally.add(c->reduced_stats);
    }
    json& res = out.summary["results"];
    res["decay_over_g"] = ratio_or_inf(p.cavity_decay, p.g);
    res["engineered_rate"] = rate;
    res["max_trace_distance_elimination"] = elim.max_trace_distance;
    res["max_trace_distance_as_printed"] = literal.max_trace_distance;
    res["transient"] = 5.0 / p.cavity_decay;
    out.summary["integration"] = stats_json(elim.full_stats);
    out.columns = {"t", "trace_distance_elimination", "trace_distance_as_printed"};
    for (std::size_t k = 0; k < elim.times.size(); ++k) {
        out.rows.push_back({elim.times[k], elim.trace_distance[k], literal.trace_distance[k]});
    }
}

// --- phases --------------------------------------------------------------------------

void run_phase_cycle(const Scenario& s, const ModelParams& p, RunResult& out) {
    const PhaseRecord rec = sp1_phase_cycle(p);
    json& res = out.summary["results"];
    res["geometric"] = rec.geometric;
    res["geometric_unwrapped"] = rec.geometric_unwrapped;
    res["dynamic"] = rec.dynamic;
    res["total"] = rec.total;
    res["cycle_time"] = rec.cycle_time;
    res["samples"] = rec.samples;
    res["expected_geometric"] = -M_PI;
    res["expected_dynamic"] = -M_PI * p.omega2 / (2.0 * p.omega1);

    // Total phase of the state propagated by H_I itself.
    const auto ud = updown_basis(p.phi1, p.phi());
    const std::vector<double> ends = {0.0, rec.cycle_time};
    const auto kets = evolve_ket([p](double t) { return interaction_drive_hamiltonian(p, t); }, ud[0].amplitudes(),
                                 ends);
    const double propagated = std::arg(ud[0].amplitudes().dot(kets.back()));
    res["total_propagated"] = propagated;
    res["total_mismatch"] = std::abs(std::remainder(propagated - rec.total, 2.0 * M_PI));

    const KetTrajectory traj = sample_path([p](double t) { return protected_state_sp1(p, t); }, rec.cycle_time,
                                           grid_samples(s, 201));
    const auto path = export_bloch_path(traj, Ket::basis(2, 0), Ket::basis(2, 1));
    out.columns = {"t", "x", "y", "z"};
    for (const auto& b : path) out.rows.push_back({b.t, b.x, b.y, b.z});
}

// --- sweep ---------------------------------------------------------------------------

struct SweepPoint {
    double value = 0.0;
    double rate_ratio = 0.0;
    double epsilon = 0.0;
    double f_formula = 0.0;
    double f_printed = kNaN;
    double f_oracle = 0.0;
    double f_oracle_as_printed = 0.0;
};

SweepPoint sweep_point(const Scenario& s, double value) {
    const Branch branch = scenario_branch(s);
    const SweepAxis& axis = *s.sweep_axis;
    ModelParams p;
    if (axis.parameter == "rate_ratio") {
        p = resolve_params(s);
        p.gamma = engineered_rate(p, branch) / value;
    } else {
        p = resolve_params(s, {{axis.parameter, value}});
    }
    SweepPoint pt;
    pt.value = value;
    const double rate = engineered_rate(p, branch);
    pt.rate_ratio = ratio_or_inf(rate, p.gamma);
    pt.epsilon = epsilon_closed_form(pt.rate_ratio, branch);
    pt.f_formula = 1.0 - pt.epsilon;
    if (branch == Branch::nonadiabatic) {
        pt.f_printed = steady_fidelity(reduced_master_equation(p, branch, GammaModel::printed_bloch));
        check_fidelity(pt.f_printed, "F_printed_ode");
    }
    pt.f_oracle =
        steady_fidelity(reduced_master_equation(p, branch, GammaModel::rwa_oracle, RateConvention::elimination));
    pt.f_oracle_as_printed =
        steady_fidelity(reduced_master_equation(p, branch, GammaModel::rwa_oracle, RateConvention::as_printed));
    check_fidelity(pt.f_oracle, "F_oracle");
    check_fidelity(pt.f_oracle_as_printed, "F_oracle_as_printed");
    return pt;
}

void run_sweep(const Scenario& s_in, const RunOptions& options, RunResult& out) {
    Scenario s = s_in;
    if (!s.sweep_axis) s.sweep_axis = SweepAxis{"rate_ratio", {1.0, 10.0, 100.0}};
    const auto& values = s.sweep_axis->values;
    std::vector<SweepPoint> points(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                points[i] = sweep_point(s, values[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(options.workers, static_cast<int>(values.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Single collector: results are assembled in axis order after all workers finish.
    json& res = out.summary["results"];
    res["axis"] = s.sweep_axis->parameter;
    res["branch"] = to_string(scenario_branch(s));
    res["points"] = json::array();
    out.columns = {s.sweep_axis->parameter, "rate_ratio", "epsilon", "F_formula", "F_printed_ode", "F_oracle",
                   "F_oracle_as_printed"};
    for (const auto& pt : points) {
        res["points"].push_back({{"value", pt.value},
                                 {"rate_ratio", pt.rate_ratio},
                                 {"epsilon", pt.epsilon},
                                 {"F_formula", pt.f_formula},
                                 {"F_printed_ode", pt.f_printed},
                                 {"F_oracle", pt.f_oracle},
                                 {"F_oracle_as_printed", pt.f_oracle_as_printed}});
        out.rows.push_back({pt.value, pt.rate_ratio, pt.epsilon, pt.f_formula, pt.f_printed, pt.f_oracle,
                            pt.f_oracle_as_printed});
    }
    out.resolved_config["sweep_axis"] = json::array({s.sweep_axis->parameter, s.sweep_axis->values});
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    auto log = [&options](const std::string& msg) {
        if (options.log) options.log(msg);
    };

    RunResult out;
    out.scenario = s;
    const ModelParams p = resolve_params(s);
    const Branch branch = scenario_branch(s);
    log("scenario " + to_string(s.kind) + " (" + to_string(branch) + " branch)");

    out.summary["schema"] = kSummarySchema;
    out.summary["scenario"] = to_string(s.kind);
    out.summary["params"] = params_to_json(p);
    out.summary["regime"] = regime_json(regime_report(p, branch));
    out.summary["results"] = json::object();
    out.resolved_config = to_json(s);
    out.resolved_config["schema"] = kConfigSchema;
    out.resolved_config["resolved_params"] = params_to_json(p);

    InvariantTally tally;
    switch (s.kind) {
        case ScenarioKind::nonadiabatic:
        case ScenarioKind::memory:
            run_reduced(s, p, out, tally);
            break;
        case ScenarioKind::interferometer:
            run_interferometer_scenario(s, p, out, tally);
            break;
        case ScenarioKind::effective_check:
            run_effective_check(s, p, out);
            break;
        case ScenarioKind::elimination_check:
            run_elimination_check(s, p, out, tally);
            break;
        case ScenarioKind::phase_cycle:
            run_phase_cycle(s, p, out);
            break;
        case ScenarioKind::sweep:
            run_sweep(s, options, out);
            break;
    }
    out.summary["invariants"] = tally.to_json();
    null_non_finite(out.summary);
    out.summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log("done in " + out.summary["wall_time_s"].dump() + " s");
    return out;
}

std::string format_csv(const RunResult& r) {
    std::string text = std::string("# ") + kSeriesSchema + " " + to_string(r.scenario.kind) + "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i) text += ',';
        text += r.columns[i];
    }
    text += '\n';
    char buf[40];
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) text += ',';
            std::snprintf(buf, sizeof buf, "%.17g", row[i] == 0.0 ? 0.0 : row[i]);
            text += buf;
        }
        text += '\n';
    }
    return text;
}

std::filesystem::path write_outputs(const RunResult& r, const std::filesystem::path& out_root) {
    const std::filesystem::path base = out_root / to_string(r.scenario.kind);
    const std::string stamp = utc_timestamp();
    std::filesystem::path dir = base / stamp;
    for (int n = 2; std::filesystem::exists(dir); ++n) dir = base / (stamp + "-" + std::to_string(n));
    std::filesystem::create_directories(dir);
    write_file(dir / "summary.json", r.summary.dump(2) + "\n");
    write_file(dir / "series.csv", format_csv(r));
    write_file(dir / "resolved_config.json", r.resolved_config.dump(2) + "\n");
    return dir;
}

}  // namespace engres
