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

#include "engres/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace engres {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

Complex phase(double angle) { return std::polar(1.0, angle); }

double ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

Matrix sigma_eg() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Matrix sigma_ge() { return sigma_eg().adjoint(); }

Matrix sigma_z() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

// X = e^{i phi1} sigma_eg + h.c.
Matrix drive_x(double phi1) {
    Matrix x = phase(phi1) * sigma_eg();
    return x + x.adjoint().eval();
}

Matrix columns(const Vector& c0, const Vector& c1) {
    Matrix m(2, 2);
    m.col(0) = c0;
    m.col(1) = c1;
    return m;
}

Matrix u1(double phi1, double omega1, double t) {
    const auto pm = pm_basis(phi1);
    return phase(-omega1 * t) * pm[0].projector() + phase(omega1 * t) * pm[1].projector();
}

// U1(t1) [e^{-i omega2 t2/2}|up>, e^{i omega2 t2/2}|down>]
Matrix dressed_frame_two_phase(const ModelParams& p, double t1, double t2) {
    const auto ud = updown_basis(p.phi1, p.phi());
    const Matrix u = u1(p.phi1, p.omega1, t1);
    return columns(u * (phase(-0.5 * p.omega2 * t2) * ud[0].amplitudes()),
                   u * (phase(0.5 * p.omega2 * t2) * ud[1].amplitudes()));
}

double parameter_scale(const ModelParams& p) {
    return std::max({p.g, p.omega1, p.omega2, std::abs(p.delta_a), std::abs(p.delta1), std::abs(p.delta2),
                     std::numeric_limits<double>::min()});
}

ConstraintCheck check(std::string name, double value, double target, double tol) {
    ConstraintCheck c;
    c.name = std::move(name);
    c.value = value;
    c.target = target;
    c.residual = std::abs(value - target);
    c.satisfied = c.residual <= tol;
    return c;
}

void require_regime(const ModelParams& p, Branch branch) {
    RegimeReport r = regime_report(p, branch);
    if (!r.satisfied()) throw RegimeError(std::move(r));
}

Matrix jump_lower() {
    // |0><1| in the dressed ordering: s_ud or s_+-.
    return sigma_eg();
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::nonadiabatic ? "nonadiabatic" : "memory"; }

const char* to_string(RateConvention c) { return c == RateConvention::as_printed ? "as_printed" : "elimination"; }

const char* to_string(GammaModel m) {
    switch (m) {
        case GammaModel::none: return "none";
        case GammaModel::printed_bloch: return "printed_bloch";
        case GammaModel::rwa_oracle: return "rwa_oracle";
    }
    return "unknown";
}

void ModelParams::validate() const {
    const double all[] = {g, omega1, omega2, phi1, phi2, delta_a, delta1, delta2, cavity_decay, gamma};
    for (double v : all) {
        if (!std::isfinite(v)) throw DomainError("model parameters must be finite");
    }
    if (g < 0.0) throw DomainError("g must be >= 0");
    if (omega1 < 0.0) throw DomainError("omega1 must be >= 0");
    if (omega2 < 0.0) throw DomainError("omega2 must be >= 0");
    if (cavity_decay < 0.0) throw DomainError("cavity_decay must be >= 0");
    if (gamma < 0.0) throw DomainError("gamma must be >= 0");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
}

DerivedMemoryParams DerivedMemoryParams::from(const ModelParams& p) {
    DerivedMemoryParams d;
    d.lambda = std::sqrt(p.omega1 * p.omega1 + 0.25 * p.delta1 * p.delta1);
    if (!(d.lambda > 0.0)) throw DomainError("memory branch needs omega1 or delta1 nonzero");
    d.chi = std::clamp(p.delta1 / d.lambda, -2.0, 2.0);
    d.g_tilde = p.g * (1.0 - 0.5 * d.chi);
    d.gamma_eng_tilde = p.cavity_decay > 0.0 ? d.g_tilde * d.g_tilde / p.cavity_decay : 0.0;
    return d;
}

bool RegimeReport::satisfied() const {
    return std::all_of(constraints.begin(), constraints.end(), [](const ConstraintCheck& c) { return c.satisfied; });
}

std::string RegimeReport::describe() const {
    std::ostringstream os;
    os << to_string(branch) << " regime";
    for (const auto& c : constraints) {
        os << "; " << c.name << "=" << c.value << " (target " << c.target << ", residual " << c.residual << ", "
           << (c.satisfied ? "ok" : "violated") << ")";
    }
    return os.str();
}

RegimeReport regime_report(const ModelParams& p, Branch branch, double rel_tol) {
    RegimeReport r;
    r.branch = branch;
    const double tol = rel_tol * parameter_scale(p);
    if (branch == Branch::nonadiabatic) {
        r.constraints.push_back(check("delta1", p.delta1, 0.0, tol));
        r.constraints.push_back(check("delta2", p.delta2, -2.0 * p.omega1, tol));
        r.constraints.push_back(check("delta_a", p.delta_a, -p.omega2, tol));
    } else {
        const double lambda = std::sqrt(p.omega1 * p.omega1 + 0.25 * p.delta1 * p.delta1);
        r.constraints.push_back(check("omega2", p.omega2, 0.0, tol));
        r.constraints.push_back(check("delta_a", p.delta_a, -2.0 * lambda, tol));
    }
    r.omega1_over_omega2 = ratio(p.omega1, p.omega2);
    r.omega2_over_g = ratio(p.omega2, p.g);
    r.decay_over_g = ratio(p.cavity_decay, p.g);
    double rate = kInf;
    if (p.cavity_decay > 0.0) {
        if (branch == Branch::nonadiabatic) {
            rate = p.g * p.g / p.cavity_decay;
        } else if (p.omega1 > 0.0 || p.delta1 != 0.0) {
            rate = DerivedMemoryParams::from(p).gamma_eng_tilde;
        }
    }
    r.engineered_over_gamma = rate == kInf ? kInf : ratio(rate, p.gamma);
    return r;
}

RegimeError::RegimeError(RegimeReport report)
    : Error("parameters outside the effective regime: " + report.describe()), report_(std::move(report)) {}

// --- bases and frames ----------------------------------------------------------------

std::array<Ket, 2> pm_basis(double phi1) {
    Vector p(2), m(2);
    p << 1.0 / kSqrt2, phase(-phi1) / kSqrt2;
    m << 1.0 / kSqrt2, -phase(-phi1) / kSqrt2;
    return {Ket(p), Ket(m)};
}

std::array<Ket, 2> updown_basis(double phi1, double phi) {
    const auto pm = pm_basis(phi1);
    const Vector up = (pm[0].amplitudes() + phase(-phi) * pm[1].amplitudes()) / kSqrt2;
    const Vector dn = (pm[0].amplitudes() - phase(-phi) * pm[1].amplitudes()) / kSqrt2;
    return {Ket(up), Ket(dn)};
}

std::array<Ket, 2> memory_basis(double phi1, double chi) {
    if (!(chi >= -2.0 && chi <= 2.0)) throw DomainError("chi must lie in [-2, 2]");
    const double a = 0.5 * std::sqrt(2.0 + chi);
    const double b = 0.5 * std::sqrt(2.0 - chi);
    Vector plus(2), minus(2);
    plus << a, b * phase(-phi1);
    minus << b, -a * phase(-phi1);
    return {Ket(plus), Ket(minus)};
}

Matrix dressed_frame(const ModelParams& p, double t) { return dressed_frame_two_phase(p, t, t); }

Matrix memory_frame(const ModelParams& p, double t) {
    const auto d = DerivedMemoryParams::from(p);
    const auto mb = memory_basis(p.phi1, d.chi);
    return columns(phase(-d.lambda * t) * mb[0].amplitudes(), phase(d.lambda * t) * mb[1].amplitudes());
}

FrameTransform nonadiabatic_frame(const ModelParams& p) {
    const auto ud = updown_basis(p.phi1, p.phi());
    const Matrix basis_adj = columns(ud[0].amplitudes(), ud[1].amplitudes()).adjoint();
    FrameTransform f;
    f.propagator = [p, basis_adj](double t) { return Matrix(dressed_frame(p, t) * basis_adj); };
    f.generator = [p](double t) { return interaction_drive_hamiltonian(p, t); };
    return f;
}

FrameTransform memory_interaction_frame(const ModelParams& p) {
    const auto d = DerivedMemoryParams::from(p);
    const auto mb = memory_basis(p.phi1, d.chi);
    const Matrix basis_adj = columns(mb[0].amplitudes(), mb[1].amplitudes()).adjoint();
    FrameTransform f;
    f.propagator = [p, basis_adj](double t) {
        Matrix z = Matrix::Zero(2, 2);
        z(0, 0) = phase(-0.5 * p.delta1 * t);
        z(1, 1) = phase(0.5 * p.delta1 * t);
        return Matrix(z * memory_frame(p, t) * basis_adj);
    };
    // i dR/dt R^+ = delta1 sigma_z + omega1 (e^{i(phi1 - delta1 t)} sigma_eg + h.c.)
    f.generator = [p](double t) {
        Matrix x = p.omega1 * phase(p.phi1 - p.delta1 * t) * sigma_eg();
        return Matrix(p.delta1 * sigma_z() + x + x.adjoint());
    };
    return f;
}

Matrix interaction_drive_hamiltonian(const ModelParams& p, double t) {
    const auto pm = pm_basis(p.phi1);
    const Matrix spm = outer(pm[0], pm[1]);
    const Matrix coupling = (0.5 * p.omega2) * phase(p.phi() - 2.0 * p.omega1 * t) * spm;
    return p.omega1 * (pm[0].projector() - pm[1].projector()) + coupling + coupling.adjoint();
}

// --- Hamiltonians --------------------------------------------------------------------

Matrix build_h1(const ModelParams& p, double t) { return h1_sampler(p)(t); }

Matrix build_h1_memory(const ModelParams& p, double t) { return h1_memory_sampler(p)(t); }

HamiltonianSampler h1_sampler(const ModelParams& p) {
    p.validate();
    const Matrix a = fock_annihilation(p.n_max);
    const Matrix cavity = kron(sigma_eg(), a);
    const Matrix drive = kron(sigma_eg(), identity(a.rows()));
    return [p, cavity, drive](double t) {
        const Complex cd = p.omega1 * phase(p.phi1 - p.delta1 * t) + p.omega2 * phase(p.phi2 - p.delta2 * t);
        const Matrix h = (p.g * phase(-p.delta_a * t)) * cavity + cd * drive;
        return Matrix(h + h.adjoint());
    };
}

HamiltonianSampler h1_memory_sampler(const ModelParams& p) {
    p.validate();
    const Matrix a = fock_annihilation(p.n_max);
    const Matrix hd = kron(0.5 * p.delta1 * sigma_z() + p.omega1 * drive_x(p.phi1), identity(a.rows()));
    const Matrix cavity = kron(sigma_eg(), a);
    return [p, hd, cavity](double t) {
        const Matrix c = (p.g * phase(-p.delta_a * t)) * cavity;
        return Matrix(hd + c + c.adjoint());
    };
}

namespace {

Matrix dressed_coupling(double coupling, double phi1, int n_max) {
    const Matrix a = fock_annihilation(n_max);
    const Matrix s = jump_lower();
    const Matrix h = (0.5 * coupling) * phase(phi1) * kron(s, a.adjoint());
    return h + h.adjoint();
}

}  // namespace

Matrix build_h2_effective(const ModelParams& p) {
    p.validate();
    require_regime(p, Branch::nonadiabatic);
    return dressed_coupling(p.g, p.phi1, p.n_max);
}

Matrix build_h2_memory(const ModelParams& p) {
    p.validate();
    require_regime(p, Branch::memory);
    return dressed_coupling(DerivedMemoryParams::from(p).g_tilde, p.phi1, p.n_max);
}

// --- reservoir -----------------------------------------------------------------------

double engineered_rate(const ModelParams& p, Branch branch) {
    p.validate();
    if (!(p.cavity_decay > 0.0)) throw DomainError("engineered rate needs cavity_decay > 0");
    const double g = branch == Branch::nonadiabatic ? p.g : DerivedMemoryParams::from(p).g_tilde;
    return g * g / p.cavity_decay;
}

double epsilon_closed_form(double rate_ratio, Branch branch) {
    if (!(rate_ratio >= 0.0)) throw DomainError("rate ratio must be >= 0");
    const double slope = branch == Branch::nonadiabatic ? 8.0 / 3.0 : 1.0;
    return 1.0 / (2.0 + slope * rate_ratio);
}

double convention_factor(RateConvention c) { return c == RateConvention::as_printed ? 1.0 : 0.5; }

Matrix printed_bloch_generator(double gamma_eng, double gamma) {
    if (!(gamma_eng >= 0.0) || !(gamma >= 0.0)) throw DomainError("rates must be >= 0");
    // vec order (uu, du, ud, dd)
    Matrix l = Matrix::Zero(4, 4);
    l(0, 0) = -9.0 * gamma / 8.0;
    l(0, 3) = gamma_eng + 3.0 * gamma / 8.0;
    l.row(3) = -l.row(0);
    const double coh = 0.5 * gamma_eng + 5.0 * gamma / 4.0;
    l(2, 2) = -coh;
    l(2, 1) = gamma / 8.0;
    l(1, 1) = -coh;
    l(1, 2) = gamma / 8.0;
    return l;
}

BlochState bloch_ode_rhs(const BlochState& s, double gamma_eng, double gamma) {
    if (std::abs(s.uu + s.dd - 1.0) > 1e-9) throw DomainError("bloch_ode_rhs: populations must sum to 1");
    if (std::abs(s.du - std::conj(s.ud)) > 1e-9) throw DomainError("bloch_ode_rhs: coherences must be conjugate");
    if (!(gamma_eng >= 0.0) || !(gamma >= 0.0)) throw DomainError("bloch_ode_rhs: rates must be >= 0");
    BlochState d;
    d.uu = (gamma_eng + 3.0 * gamma / 8.0) - (gamma_eng + 6.0 * gamma / 4.0) * s.uu;
    d.dd = -d.uu;
    d.ud = -(0.5 * gamma_eng + 5.0 * gamma / 4.0) * s.ud + (gamma / 8.0) * s.du;
    d.du = std::conj(d.ud);
    return d;
}

Matrix averaged_emission_generator(const ModelParams& p, Branch branch, const AverageOptions& options) {
    p.validate();
    const Matrix sge = sigma_ge();
    if (branch == Branch::memory) {
        const auto d = DerivedMemoryParams::from(p);
        LindbladTerm term{p.gamma, TimeOperator(
                                       [p, sge](double t) {
                                           const Matrix w = memory_frame(p, t);
                                           return Matrix(w.adjoint() * sge * w);
                                       },
                                       2),
                          0.5};
        return transformed_dissipator_average(term, M_PI / d.lambda, options);
    }
    if (!(p.omega1 > 0.0)) throw DomainError("nonadiabatic frame average needs omega1 > 0");
    const auto pm = pm_basis(p.phi1);
    const auto ud = updown_basis(p.phi1, p.phi());
    const Matrix p_plus = pm[0].projector();
    const Matrix p_minus = pm[1].projector();
    auto at = [&](double t1, double t2) {
        const Matrix u = phase(-p.omega1 * t1) * p_plus + phase(p.omega1 * t1) * p_minus;
        const Matrix m = u * columns(phase(-0.5 * p.omega2 * t2) * ud[0].amplitudes(),
                                     phase(0.5 * p.omega2 * t2) * ud[1].amplitudes());
        return Matrix(p.gamma * dissipator_superoperator(m.adjoint() * sge * m, 0.5));
    };
    const double outer_period = M_PI / p.omega1;
    if (!(p.omega2 > 0.0)) {
        return average_superoperator([&](double t1) { return at(t1, 0.0); }, outer_period, options);
    }
    // The integrand is a trigonometric polynomial of degree 2 in the inner
    // phase, so a short inner grid is already exact; its doubling check stays.
    AverageOptions inner = options;
    inner.min_points = 32;
    const double inner_period = 2.0 * M_PI / p.omega2;
    return average_superoperator(
        [&](double t1) {
            return average_superoperator([&](double t2) { return at(t1, t2); }, inner_period, inner);
        },
        outer_period, options);
}

DressedRates dressed_rates(const Matrix& generator) {
    if (generator.rows() != 4 || generator.cols() != 4) throw DomainError("dressed_rates: expected a 4x4 generator");
    DressedRates r;
    r.source = generator(0, 3).real();
    r.loss_up = -generator(0, 0).real();
    r.coherence = -generator(2, 2).real();
    r.cross = generator(2, 1).real();
    r.frequency_shift = generator(2, 2).imag();
    return r;
}

MasterEquation reduced_master_equation(const ModelParams& p, Branch branch, GammaModel gamma_model,
                                       RateConvention convention) {
    const double rate = engineered_rate(p, branch);
    const double factor = convention_factor(convention);
    MasterEquation me(2);
    me.add_term(LindbladTerm{rate, TimeOperator(jump_lower()), factor});
    switch (gamma_model) {
        case GammaModel::none:
            break;
        case GammaModel::printed_bloch:
            if (branch != Branch::nonadiabatic) {
                throw DomainError("the published Bloch equations cover the nonadiabatic branch only");
            }
            me.add_generator(printed_bloch_generator(rate, p.gamma) - rate * dissipator_superoperator(jump_lower(), factor));
            break;
        case GammaModel::rwa_oracle:
            me.add_generator(averaged_emission_generator(p, branch));
            break;
    }
    return me;
}

DensityMatrix asymptotic_state(Branch branch, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 - epsilon;
    m(1, 1) = epsilon;
    if (branch == Branch::memory && epsilon > 0.0) {
        const double one_minus = 1.0 - epsilon;
        if (one_minus * one_minus * one_minus < epsilon) {
            throw DomainError("memory asymptotic state is not positive for epsilon = " + std::to_string(epsilon));
        }
        m(0, 1) = m(1, 0) = epsilon / one_minus;
    }
    return DensityMatrix(m);
}

Ket protected_state_sp1(const ModelParams& p, double t) {
    const double theta = 0.5 * p.phi() - p.omega1 * t;
    Vector v(2);
    v << std::cos(theta), kI * phase(-p.phi1) * std::sin(theta);
    return Ket(v);
}

Ket protected_state_sp1_cyclic(const ModelParams& p, double t) {
    const auto pm = pm_basis(p.phi1);
    return Ket((pm[0].amplitudes() + phase(-(p.phi() - 2.0 * p.omega1 * t)) * pm[1].amplitudes()) / kSqrt2);
}

Ket protected_state_sp2(const ModelParams& p, double t) {
    const auto d = DerivedMemoryParams::from(p);
    Vector v(2);
    v << std::sqrt(2.0 + d.chi), phase(-(p.phi1 - p.delta1 * t)) * std::sqrt(2.0 - d.chi);
    return Ket(v / 2.0);
}

MasterEquation full_system_master_equation(const ModelParams& p, Branch branch, ModelFrame frame,
                                           bool include_gamma) {
    p.validate();
    const Index nf = p.n_max + 1;
    const Index dim = 2 * nf;
    const Matrix i_f = identity(nf);
    MasterEquation me(dim);

    if (frame == ModelFrame::bare) {
        me.set_hamiltonian(TimeOperator(branch == Branch::nonadiabatic ? h1_sampler(p) : h1_memory_sampler(p), dim));
    } else {
        me.set_hamiltonian(TimeOperator(branch == Branch::nonadiabatic ? build_h2_effective(p) : build_h2_memory(p)));
    }
    if (p.cavity_decay > 0.0) {
        me.add_term(LindbladTerm{p.cavity_decay, TimeOperator(kron(identity(2), fock_annihilation(p.n_max))), 0.5});
    }
    if (include_gamma && p.gamma > 0.0) {
        const Matrix sge = sigma_ge();
        if (frame == ModelFrame::bare) {
            me.add_term(LindbladTerm{p.gamma, TimeOperator(kron(sge, i_f)), 0.5});
        } else if (branch == Branch::nonadiabatic) {
            me.add_term(LindbladTerm{p.gamma, TimeOperator(
                                                  [p, sge, i_f](double t) {
                                                      const Matrix m = dressed_frame(p, t);
                                                      return kron(m.adjoint() * sge * m, i_f);
                                                  },
                                                  dim),
                                     0.5});
        } else {
            me.add_term(LindbladTerm{p.gamma, TimeOperator(
                                                  [p, sge, i_f](double t) {
                                                      const Matrix w = memory_frame(p, t);
                                                      return kron(w.adjoint() * sge * w, i_f);
                                                  },
                                                  dim),
                                     0.5});
        }
    }
    return me;
}

EliminationComparison compare_elimination(const ModelParams& p, Branch branch, const Ket& tl_state,
                                          RateConvention convention, double horizon, int samples) {
    if (tl_state.dim() != 2) throw DomainError("compare_elimination: two-level state expected");
    if (!(horizon > 0.0) || samples < 2) throw DomainError("compare_elimination: invalid grid");
    ModelParams q = p;
    q.gamma = 0.0;
    const Index nf = q.n_max + 1;

    EliminationComparison out;
    out.times.resize(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) out.times[k] = horizon * k / (samples - 1);

    const MasterEquation full = full_system_master_equation(q, branch, ModelFrame::dressed, false);
    const MasterEquation reduced = reduced_master_equation(q, branch, GammaModel::none, convention);
    const auto full_traj = evolve(full, DensityMatrix::pure(tensor(tl_state, Ket::basis(nf, 0))), out.times);
    const auto red_traj = evolve(reduced, DensityMatrix::pure(tl_state), out.times);
    out.full_stats = full_traj.stats;
    out.reduced_stats = red_traj.stats;

    const double transient = 5.0 / q.cavity_decay;
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        const DensityMatrix marginal = partial_trace_second(full_traj.states[k], 2, nf);
        const double d = trace_distance(marginal, red_traj.states[k]);
        out.trace_distance.push_back(d);
        if (out.times[k] >= transient) out.max_trace_distance = std::max(out.max_trace_distance, d);
    }
    return out;
}

EffectiveComparison compare_effective_model(const ModelParams& p, Branch branch, const Ket& psi0, double horizon,
                                            int samples) {
    p.validate();
    const Matrix i_f = identity(p.n_max + 1);
    CompareOptions opts;
    opts.samples = samples;
    if (branch == Branch::nonadiabatic) {
        const Matrix h2 = build_h2_effective(p);
        opts.frame = [p, i_f](double t) { return kron(dressed_frame(p, t), i_f); };
        return compare_effective(h1_sampler(p), [h2](double) { return h2; }, psi0, horizon, opts);
    }
    const Matrix h2 = build_h2_memory(p);
    opts.frame = [p, i_f](double t) { return kron(memory_frame(p, t), i_f); };
    return compare_effective(h1_memory_sampler(p), [h2](double) { return h2; }, psi0, horizon, opts);
}

}  // namespace engres
