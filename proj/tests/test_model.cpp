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

#include "engres/error.hpp"
#include "engres/frames.hpp"
#include "engres/model.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace engres {
namespace {

using testing::max_diff;

// Fock-ordered index of |tl, n> on TL (x) Fock.
Index idx(Index tl, Index n, int n_max) { return tl * (n_max + 1) + n; }

ModelParams regime_params() {
    ModelParams p;
    p.g = 1.0;
    p.omega1 = 400.0;
    p.omega2 = 20.0;
    p.delta1 = 0.0;
    p.delta2 = -800.0;
    p.delta_a = -20.0;
    p.cavity_decay = 20.0;
    p.gamma = 0.0;
    p.n_max = 2;
    return p;
}

ModelParams memory_params(double chi) {
    ModelParams p;
    p.g = 1.0;
    p.omega2 = 0.0;
    const double lambda = 200.0;
    p.delta1 = chi * lambda;
    p.omega1 = std::sqrt(lambda * lambda - 0.25 * p.delta1 * p.delta1);
    p.delta_a = -2.0 * lambda;
    p.cavity_decay = 20.0;
    p.gamma = 0.0;
    p.n_max = 2;
    return p;
}

TEST(Params, Validation) {
    ModelParams p;
    EXPECT_NO_THROW(p.validate());
    p.omega2 = -1.0;
    EXPECT_THROW(p.validate(), DomainError);
    p = ModelParams{};
    p.n_max = 0;
    EXPECT_THROW(p.validate(), DomainError);
    p = ModelParams{};
    p.phi1 = 0.7;
    p.phi2 = 0.2;
    EXPECT_DOUBLE_EQ(p.phi(), 0.5);
}

TEST(Params, MemoryDerivedQuantities) {
    for (double chi : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
        const auto d = DerivedMemoryParams::from(memory_params(chi));
        EXPECT_NEAR(d.chi, chi, 1e-12);
        EXPECT_NEAR(d.lambda, 200.0, 1e-9);
        EXPECT_NEAR(d.g_tilde, 1.0 - 0.5 * chi, 1e-12);
        EXPECT_NEAR(d.gamma_eng_tilde, d.g_tilde * d.g_tilde / 20.0, 1e-15);
    }
    ModelParams zero;
    zero.omega1 = 0.0;
    zero.delta1 = 0.0;
    EXPECT_THROW(DerivedMemoryParams::from(zero), DomainError);
}

TEST(Regime, ReportsResiduals) {
    const RegimeReport ok = regime_report(ModelParams{}, Branch::nonadiabatic);
    EXPECT_TRUE(ok.satisfied());
    EXPECT_NEAR(ok.engineered_over_gamma, 100.0, 1e-12);
    EXPECT_NEAR(ok.omega1_over_omega2, 20.0, 1e-12);
    ModelParams p;
    p.delta_a = -1.5e6;
    const RegimeReport bad = regime_report(p, Branch::nonadiabatic);
    EXPECT_FALSE(bad.satisfied());
    bool found = false;
    for (const auto& c : bad.constraints) {
        if (c.name == "delta_a") {
            found = true;
            EXPECT_FALSE(c.satisfied);
            EXPECT_NEAR(c.residual, 5e5, 1e-6);
        }
    }
    EXPECT_TRUE(found);
    EXPECT_TRUE(regime_report(memory_params(1.0), Branch::memory).satisfied());
}

TEST(H1, ZeroWithoutCouplings) {
    ModelParams p;
    p.g = p.omega1 = p.omega2 = 0.0;
    EXPECT_LT(max_abs(build_h1(p, 0.37)), 1e-300);
}

TEST(H1, ReadOffAtTimeZero) {
    ModelParams p;
    p.g = 2.0;
    p.omega1 = 3.0;
    p.omega2 = 5.0;
    p.delta_a = p.delta1 = p.delta2 = 0.0;
    p.n_max = 2;
    const Matrix h = build_h1(p, 0.0);
    // <e, n-1| H |g, n> = g sqrt(n); <e, n| H |g, n> = omega1 + omega2
    for (int n = 0; n <= 2; ++n) {
        EXPECT_NEAR(std::abs(h(idx(0, n, 2), idx(1, n, 2)) - 8.0), 0.0, 1e-14);
        if (n > 0) EXPECT_NEAR(std::abs(h(idx(0, n - 1, 2), idx(1, n, 2)) - 2.0 * std::sqrt(n)), 0.0, 1e-14);
    }
    EXPECT_NEAR(std::abs(h(idx(0, 0, 2), idx(0, 0, 2))), 0.0, 1e-300);
}

TEST(H1, HermitianForRandomParameters) {
    for (int trial = 0; trial < 10; ++trial) {
        ModelParams p;
        p.g = testing::uniform(0, 3);
        p.omega1 = testing::uniform(0, 3);
        p.omega2 = testing::uniform(0, 3);
        p.phi1 = testing::uniform(-3, 3);
        p.phi2 = testing::uniform(-3, 3);
        p.delta_a = testing::uniform(-3, 3);
        p.delta1 = testing::uniform(-3, 3);
        p.delta2 = testing::uniform(-3, 3);
        const double t = testing::uniform(0, 10);
        EXPECT_LE(hermiticity_error(build_h1(p, t)), 1e-12);
        EXPECT_LE(hermiticity_error(build_h1_memory(p, t)), 1e-12);
    }
}

TEST(H2, CouplingMagnitude) {
    ModelParams p = regime_params();
    p.n_max = 1;
    EXPECT_NEAR(spectral_norm(build_h2_effective(p)), 0.5 * p.g, 1e-12);
}

TEST(H2, PhaseShiftFlipsSign) {
    ModelParams p = regime_params();
    p.phi1 = 0.4;
    p.phi2 = 0.4;
    const Matrix a = build_h2_effective(p);
    p.phi1 += M_PI;
    p.phi2 += M_PI;
    EXPECT_LT(max_diff(build_h2_effective(p), Matrix(-a)), 1e-14);
}

TEST(H2, MatrixElements) {
    ModelParams p = regime_params();
    p.phi1 = 0.7;
    p.phi2 = 0.7;
    const Matrix h = build_h2_effective(p);
    const int n = p.n_max;
    const Complex half_g = 0.5 * p.g;
    // |up, 1> <-> |down, 0>; the up-down/photon-number pairing is fixed by a^+ s_ud.
    EXPECT_NEAR(std::abs(h(idx(0, 1, n), idx(1, 0, n)) - half_g * std::polar(1.0, 0.7)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(h(idx(1, 0, n), idx(0, 1, n)) - half_g * std::polar(1.0, -0.7)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(h(idx(1, 1, n), idx(0, 0, n))), 0.0, 1e-300);
    EXPECT_LE(hermiticity_error(h), 1e-14);
}

TEST(H2, RegimeViolationCarriesReport) {
    ModelParams p = regime_params();
    p.delta2 = -790.0;
    try {
        build_h2_effective(p);
        FAIL() << "expected RegimeError";
    } catch (const RegimeError& e) {
        EXPECT_FALSE(e.report().satisfied());
    }
    ModelParams m = memory_params(0.0);
    m.omega2 = 1.0;
    EXPECT_THROW(build_h2_memory(m), RegimeError);
}

TEST(H2Memory, CouplingFollowsChi) {
    EXPECT_NEAR(spectral_norm(build_h2_memory(memory_params(0.0))), 0.5 * std::sqrt(2.0), 1e-12);
    EXPECT_LT(max_abs(build_h2_memory(memory_params(2.0))), 1e-15);
    // g~ = 2g at chi = -2: largest singular value (g~/2) sqrt(n_max)
    EXPECT_NEAR(spectral_norm(build_h2_memory(memory_params(-2.0))), std::sqrt(2.0), 1e-12);
}

TEST(Rates, EngineeredRate) {
    const ModelParams p;
    EXPECT_DOUBLE_EQ(engineered_rate(p, Branch::nonadiabatic), 1e4);
    EXPECT_DOUBLE_EQ(engineered_rate(p, Branch::nonadiabatic) / p.gamma, 100.0);
    ModelParams z = p;
    z.g = 0.0;
    EXPECT_EQ(engineered_rate(z, Branch::nonadiabatic), 0.0);
    z = p;
    z.cavity_decay = 0.0;
    EXPECT_THROW(engineered_rate(z, Branch::nonadiabatic), DomainError);
    ModelParams m = p;
    m.omega2 = 0.0;
    m.delta1 = 0.0;
    EXPECT_DOUBLE_EQ(engineered_rate(m, Branch::memory), engineered_rate(p, Branch::nonadiabatic));
}

TEST(Rates, EpsilonClosedForm) {
    EXPECT_NEAR(epsilon_closed_form(10.0, Branch::nonadiabatic), 3.0 / 86.0, 1e-15);
    EXPECT_NEAR(epsilon_closed_form(100.0, Branch::memory), 1.0 / 102.0, 1e-15);
    EXPECT_DOUBLE_EQ(epsilon_closed_form(0.0, Branch::nonadiabatic), 0.5);
    EXPECT_DOUBLE_EQ(epsilon_closed_form(0.0, Branch::memory), 0.5);
    EXPECT_THROW(epsilon_closed_form(-1.0, Branch::memory), DomainError);
    for (auto b : {Branch::nonadiabatic, Branch::memory}) {
        double prev = 1.0;
        for (double r = 0.0; r < 1e6; r = 2.0 * r + 0.1) {
            const double e = epsilon_closed_form(r, b);
            EXPECT_LT(e, prev);
            prev = e;
        }
        EXPECT_LT(prev, 1e-5);
    }
}

TEST(BlochOde, FixedPointWithoutEmission) {
    const BlochState d = bloch_ode_rhs({1.0, 0.0, 0.0, 0.0}, 5.0, 0.0);
    EXPECT_EQ(d.uu, Complex(0.0));
    EXPECT_EQ(d.ud, Complex(0.0));
}

TEST(BlochOde, EmissionOnlySteadyPopulation) {
    // 3 gamma/8 - (6 gamma/4) uu = 0  =>  uu = 1/4
    const BlochState d = bloch_ode_rhs({0.25, 0.75, 0.0, 0.0}, 0.0, 2.0);
    EXPECT_NEAR(std::abs(d.uu), 0.0, 1e-15);
}

TEST(BlochOde, ConservesPopulationAndMatchesGenerator) {
    const Matrix l = printed_bloch_generator(1.7, 0.6);
    for (int trial = 0; trial < 5; ++trial) {
        const double uu = testing::uniform(0, 1);
        const Complex ud(testing::uniform(-0.3, 0.3), testing::uniform(-0.3, 0.3));
        const BlochState s{uu, 1.0 - uu, ud, std::conj(ud)};
        const BlochState d = bloch_ode_rhs(s, 1.7, 0.6);
        EXPECT_NEAR(std::abs(d.uu + d.dd), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(d.du - std::conj(d.ud)), 0.0, 1e-15);
        Vector v(4);
        v << s.uu, s.du, s.ud, s.dd;
        const Vector dv = l * v;
        EXPECT_NEAR(std::abs(dv(0) - d.uu), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(dv(2) - d.ud), 0.0, 1e-14);
    }
    EXPECT_THROW(bloch_ode_rhs({0.5, 0.6, 0.0, 0.0}, 1.0, 1.0), DomainError);
    EXPECT_THROW(bloch_ode_rhs({0.5, 0.5, Complex(0.1, 0.1), Complex(0.1, 0.1)}, 1.0, 1.0), DomainError);
}

TEST(BlochOde, CoherenceBlockEigenvalues) {
    const double ge = 3.0, gamma = 2.0;
    const Matrix block = printed_bloch_generator(ge, gamma).block(1, 1, 2, 2);
    Eigen::ComplexEigenSolver<Matrix> es(block);
    std::vector<double> ev = {es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(ev.begin(), ev.end());
    const double centre = -(ge / 2.0 + 5.0 * gamma / 4.0);
    EXPECT_NEAR(ev[0], centre - gamma / 8.0, 1e-12);
    EXPECT_NEAR(ev[1], centre + gamma / 8.0, 1e-12);
}

TEST(ReducedEquation, PureFixedPointWithoutEmission) {
    ModelParams p;
    p.gamma = 0.0;
    const SteadyState ss = steady_state(reduced_master_equation(p, Branch::nonadiabatic, GammaModel::none));
    EXPECT_LT(trace_distance(ss.rho, DensityMatrix::pure(Ket::basis(2, 0))), 1e-9);
}

TEST(ReducedEquation, PrintedBlochSteadyState) {
    ModelParams p;
    p.gamma = engineered_rate(p, Branch::nonadiabatic) / 10.0;
    for (auto conv : {RateConvention::as_printed, RateConvention::elimination}) {
        const SteadyState ss =
            steady_state(reduced_master_equation(p, Branch::nonadiabatic, GammaModel::printed_bloch, conv));
        EXPECT_NEAR(ss.rho(0, 0).real(), 10.375 / 11.5, 1e-9);
        EXPECT_NEAR(std::abs(ss.rho(0, 1)), 0.0, 1e-12);
    }
    EXPECT_THROW(reduced_master_equation(p, Branch::memory, GammaModel::printed_bloch), DomainError);
}

TEST(ReducedEquation, OracleMatchesCommensurateTimeAverage) {
    // omega1 = 400, omega2 = 20 share the period 2 pi/20, so a plain
    // one-period average of the conjugated dissipator is exact.
    ModelParams p = regime_params();
    p.phi1 = 0.3;
    p.phi2 = -0.2;
    p.gamma = 1.0;
    Matrix sge = Matrix::Zero(2, 2);
    sge(1, 0) = 1.0;
    const int n = 2048;
    const double period = 2.0 * M_PI / p.omega2;
    Matrix direct = Matrix::Zero(4, 4);
    for (int k = 0; k < n; ++k) {
        const Matrix m = dressed_frame(p, period * k / n);
        direct += dissipator_superoperator(m.adjoint() * sge * m, 0.5);
    }
    direct /= static_cast<double>(n);
    const Matrix torus = averaged_emission_generator(p, Branch::nonadiabatic);
    EXPECT_LT(max_diff(torus, direct), 1e-10);

    const DressedRates r = dressed_rates(torus);
    EXPECT_NEAR(r.source, 3.0 / 8.0, 1e-10);
    EXPECT_NEAR(r.source + r.loss_up, 3.0 / 4.0, 1e-10);
    EXPECT_NEAR(r.coherence, 5.0 / 8.0, 1e-10);
    EXPECT_NEAR(r.cross, 0.0, 1e-10);
}

TEST(AsymptoticState, ClosedForms) {
    EXPECT_NEAR(fidelity(asymptotic_state(Branch::nonadiabatic, 0.0), Ket::basis(2, 0)), 1.0, 1e-15);
    const DensityMatrix rho = asymptotic_state(Branch::nonadiabatic, 3.0 / 86.0);
    EXPECT_NEAR(rho(0, 0).real(), 83.0 / 86.0, 1e-15);
    EXPECT_NEAR(rho(1, 1).real(), 3.0 / 86.0, 1e-15);
    const DensityMatrix mem = asymptotic_state(Branch::memory, 1.0 / 102.0);
    EXPECT_NEAR(fidelity(mem, Ket::basis(2, 0)), 101.0 / 102.0, 1e-15);
    EXPECT_NEAR(mem(0, 1).real(), (1.0 / 102.0) / (101.0 / 102.0), 1e-15);
    EXPECT_THROW(asymptotic_state(Branch::memory, 0.4), DomainError);
    EXPECT_THROW(asymptotic_state(Branch::nonadiabatic, 1.5), DomainError);
}

TEST(ProtectedStates, Sp1SpecialTimes) {
    ModelParams p;
    EXPECT_NEAR(std::abs(protected_state_sp1(p, 0.0)[0]), 1.0, 1e-15);
    p.phi1 = 0.9;
    p.phi2 = 0.2;
    const double t = p.phi() / (2.0 * p.omega1);
    EXPECT_NEAR(std::abs(protected_state_sp1(p, t)[0]), 1.0, 1e-12);
}

TEST(ProtectedStates, Sp1IsNullVectorOfInteractionPictureJump) {
    ModelParams p;
    p.omega1 = 3.0;
    p.omega2 = 0.5;
    p.phi1 = 0.4;
    p.phi2 = -0.3;
    const FrameTransform f = nonadiabatic_frame(p);
    const auto ud = updown_basis(p.phi1, p.phi());
    const Matrix jump = outer(ud[0], ud[1]);
    for (double t : {0.0, 0.21, 0.8, 1.7}) {
        const Matrix l = conjugate_operator(f.propagator(t), jump);
        const Ket psi = protected_state_sp1(p, t);
        EXPECT_LE((l * psi.amplitudes()).norm(), 1e-9);
        const Ket cyc = protected_state_sp1_cyclic(p, t);
        EXPECT_NEAR(std::norm(psi.overlap(cyc)), 1.0, 1e-12);
        // nilpotent: trace and determinant vanish
        EXPECT_LE(std::abs(l.trace()), 1e-9);
        EXPECT_LE(std::abs(l.determinant()), 1e-12);
    }
    // the cyclic gauge closes after pi/omega1
    const Ket a = protected_state_sp1_cyclic(p, 0.0);
    const Ket b = protected_state_sp1_cyclic(p, M_PI / p.omega1);
    EXPECT_LT(max_diff(a.amplitudes(), b.amplitudes()), 1e-12);
}

TEST(ProtectedStates, Sp2Forms) {
    ModelParams p = memory_params(0.0);
    p.phi1 = 0.6;
    const Ket s0 = protected_state_sp2(p, 0.0);
    const Ket s1 = protected_state_sp2(p, 0.37);
    EXPECT_LT(max_diff(s0.amplitudes(), s1.amplitudes()), 1e-15);
    EXPECT_NEAR(std::abs(s0[1] - std::polar(1.0, -0.6) / std::sqrt(2.0)), 0.0, 1e-15);

    const Ket ground = protected_state_sp2(memory_params(-2.0), 0.3);
    EXPECT_NEAR(std::abs(ground[1]), 1.0, 1e-12);
    for (double chi : {-2.0, -1.3, 0.0, 0.8, 2.0}) {
        EXPECT_NEAR(protected_state_sp2(memory_params(chi), 0.1).amplitudes().norm(), 1.0, 1e-14);
    }
}

TEST(ProtectedStates, Sp2IsNullVectorOfInteractionPictureJump) {
    ModelParams p = memory_params(0.7);
    p.phi1 = -0.4;
    const auto d = DerivedMemoryParams::from(p);
    const auto mb = memory_basis(p.phi1, d.chi);
    const FrameTransform f = memory_interaction_frame(p);
    for (double t : {0.0, 0.013, 0.05}) {
        const Matrix l = conjugate_operator(f.propagator(t), outer(mb[0], mb[1]));
        EXPECT_LE((l * protected_state_sp2(p, t).amplitudes()).norm(), 1e-9);
    }
}

TEST(Bases, MemoryBasisDiagonalizesDrive) {
    for (double chi : {-1.5, 0.0, 1.0}) {
        ModelParams p = memory_params(chi);
        p.phi1 = 0.8;
        const auto d = DerivedMemoryParams::from(p);
        Matrix hd = Matrix::Zero(2, 2);
        hd(0, 0) = 0.5 * p.delta1;
        hd(1, 1) = -0.5 * p.delta1;
        hd(0, 1) = p.omega1 * std::polar(1.0, p.phi1);
        hd(1, 0) = std::conj(hd(0, 1));
        const auto mb = memory_basis(p.phi1, d.chi);
        EXPECT_LT((hd * mb[0].amplitudes() - d.lambda * mb[0].amplitudes()).norm(), 1e-9);
        EXPECT_LT((hd * mb[1].amplitudes() + d.lambda * mb[1].amplitudes()).norm(), 1e-9);
        EXPECT_NEAR(std::abs(mb[0].overlap(mb[1])), 0.0, 1e-15);
    }
}

TEST(FullSystem, ClosedSystemConservesPurity) {
    ModelParams p = regime_params();
    p.cavity_decay = 0.0;
    const MasterEquation me = full_system_master_equation(p, Branch::nonadiabatic, ModelFrame::dressed, false);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
    const Ket psi = tensor(Ket::basis(2, 1), Ket::basis(3, 0));
    const Trajectory traj = evolve(me, DensityMatrix::pure(psi), times);
    for (const auto& s : traj.states) EXPECT_NEAR(s.purity(), 1.0, 1e-8);
}

TEST(FullSystem, PhotonPopulationStaysSmall) {
    const ModelParams p = regime_params();
    const MasterEquation me = full_system_master_equation(p, Branch::nonadiabatic, ModelFrame::dressed, false);
    const double rate = engineered_rate(p, Branch::nonadiabatic);
    std::vector<double> times;
    for (int k = 0; k <= 200; ++k) times.push_back(10.0 / rate * k / 200.0);
    const Trajectory traj = evolve(me, DensityMatrix::pure(tensor(Ket::basis(2, 1), Ket::basis(3, 0))), times);
    const Matrix a = kron(identity(2), fock_annihilation(p.n_max));
    const Matrix num = a.adjoint() * a;
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, (num * s.matrix()).trace().real());
    EXPECT_LE(worst, 1.5 * rate / p.cavity_decay);
    EXPECT_GT(fidelity(traj.states.back(), tensor(Ket::basis(2, 0), Ket::basis(3, 0))), 0.999);
}

TEST(FullSystem, EliminationAgreementImprovesWithDecay) {
    const Ket tl = Ket::normalize(Vector::Ones(2));
    double previous = 1.0;
    for (double ratio : {10.0, 20.0, 40.0}) {
        ModelParams p = regime_params();
        p.cavity_decay = ratio * p.g;
        const double rate = engineered_rate(p, Branch::nonadiabatic);
        const auto c = compare_elimination(p, Branch::nonadiabatic, tl, RateConvention::elimination, 10.0 / rate);
        EXPECT_LT(c.max_trace_distance, previous);
        if (ratio >= 20.0) EXPECT_LE(c.max_trace_distance, 0.05);
        previous = c.max_trace_distance;
    }
}

TEST(FullSystem, LiteralPrefactorDoesNotConverge) {
    ModelParams p = regime_params();
    p.cavity_decay = 40.0;
    const double rate = engineered_rate(p, Branch::nonadiabatic);
    const auto c = compare_elimination(p, Branch::nonadiabatic, Ket::normalize(Vector::Ones(2)),
                                       RateConvention::as_printed, 10.0 / rate);
    EXPECT_GT(c.max_trace_distance, 0.1);
}

TEST(Effective, NonadiabaticRegimeFidelity) {
    const ModelParams p = regime_params();
    const int n = p.n_max;
    const auto up = compare_effective_model(p, Branch::nonadiabatic, Ket::basis(6, idx(0, 0, n)), 2.0);
    EXPECT_GE(up.worst_fidelity, 0.998);
    const auto down = compare_effective_model(p, Branch::nonadiabatic, Ket::basis(6, idx(1, 0, n)), 2.0);
    EXPECT_GE(down.worst_fidelity, 0.998);
}

TEST(Effective, DetuningViolationDegradesFidelity) {
    const ModelParams good = regime_params();
    ModelParams bad = good;
    bad.delta_a = -15.0;
    const Matrix h2 = build_h2_effective(good);
    const Matrix i_f = identity(good.n_max + 1);
    CompareOptions opts;
    opts.frame = [good, i_f](double t) { return kron(dressed_frame(good, t), i_f); };
    const Ket psi = Ket::basis(6, idx(1, 0, good.n_max));
    const auto compliant = compare_effective(h1_sampler(good), [&](double) { return h2; }, psi, 2.0, opts);
    const auto violated = compare_effective(h1_sampler(bad), [&](double) { return h2; }, psi, 2.0, opts);
    EXPECT_LT(violated.worst_fidelity, compliant.worst_fidelity - 0.1);
}

TEST(Effective, MemoryBranchFidelity) {
    for (double chi : {-1.0, 0.0, 1.0}) {
        const ModelParams p = memory_params(chi);
        for (Index tl : {0, 1}) {
            const auto c = compare_effective_model(p, Branch::memory, Ket::basis(6, idx(tl, 0, p.n_max)), 2.0);
            EXPECT_GE(c.worst_fidelity, 0.99) << "chi=" << chi << " tl=" << tl;
        }
    }
}

}  // namespace
}  // namespace engres
