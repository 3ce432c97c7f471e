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

// Trapped-ion / cavity model: drive and cavity Hamiltonians, dressed bases,
// engineered reservoir master equations, closed-form steady states and the
// regime checks that gate the effective descriptions.
//
// Two-level ordering is (e, g) in bare coordinates, (up, down) in the
// nonadiabatic dressed frame and (+~, -~) in the memory frame. Composite
// spaces are TL (x) Fock.

#include "engres/error.hpp"
#include "engres/frames.hpp"
#include "engres/lindblad.hpp"
#include "engres/quantum_core.hpp"

#include <array>
#include <string>
#include <vector>

namespace engres {

enum class Branch { nonadiabatic, memory };

// Prefactor applied to the engineered jump term. as_printed reads
// Gamma_eng (2 s rho s^+ - ...) literally; elimination uses the factor 1/2
// produced by adiabatically eliminating a cavity damped as (Gamma/2)(...).
enum class RateConvention { as_printed, elimination };

// How spontaneous emission enters the reduced two-level equation.
enum class GammaModel {
    none,
    printed_bloch,  // the published Bloch equations, verbatim (nonadiabatic only)
    rwa_oracle,     // sigma_ge dissipator averaged in the dressed frame
};

// Picture for the full TL (x) Fock model: bare keeps the time-dependent drive
// Hamiltonian, dressed uses the effective coupling.
enum class ModelFrame { bare, dressed };

const char* to_string(Branch b);
const char* to_string(RateConvention c);
const char* to_string(GammaModel m);

struct ModelParams {
    double g = 1e5;              // rad/s
    double omega1 = 4e7;         // rad/s
    double omega2 = 2e6;         // rad/s
    double phi1 = 0.0;           // rad
    double phi2 = 0.0;           // rad
    double delta_a = -2e6;       // rad/s
    double delta1 = 0.0;         // rad/s
    double delta2 = -8e7;        // rad/s
    double cavity_decay = 1e6;   // s^-1
    double gamma = 1e2;          // s^-1
    int n_max = 2;

    double phi() const { return phi1 - phi2; }

    // Throws DomainError on negative rates, non-finite values or n_max < 1.
    void validate() const;
};

struct DerivedMemoryParams {
    double lambda = 0.0;
    double chi = 0.0;
    double g_tilde = 0.0;
    double gamma_eng_tilde = 0.0;  // 0 when the cavity decay is 0

    // Throws DomainError when omega1 = delta1 = 0.
    static DerivedMemoryParams from(const ModelParams& p);
};

struct ConstraintCheck {
    std::string name;
    double target = 0.0;
    double value = 0.0;
    double residual = 0.0;  // |value - target|, rad/s
    bool satisfied = false;
};

struct RegimeReport {
    Branch branch = Branch::nonadiabatic;
    std::vector<ConstraintCheck> constraints;
    // Infinite when the denominator vanishes.
    double omega1_over_omega2 = 0.0;
    double omega2_over_g = 0.0;
    double decay_over_g = 0.0;
    double engineered_over_gamma = 0.0;

    bool satisfied() const;
    std::string describe() const;
};

// Constraint residuals are accepted up to rel_tol times the largest drive,
// detuning or coupling magnitude in p.
RegimeReport regime_report(const ModelParams& p, Branch branch, double rel_tol = 1e-9);

class RegimeError : public Error {
public:
    explicit RegimeError(RegimeReport report);
    const RegimeReport& report() const { return report_; }

private:
    RegimeReport report_;
};

// --- bases and frames ----------------------------------------------------------------

// {|+>, |->} with |+-> = (|e> +- e^{-i phi1}|g>)/sqrt 2.
std::array<Ket, 2> pm_basis(double phi1);
// {|up>, |down>} = (|+> +- e^{-i phi}|->)/sqrt 2, bare coordinates.
std::array<Ket, 2> updown_basis(double phi1, double phi);
// {|+~>, |-~>} = (sqrt(2 +- chi)|e> +- e^{-i phi1} sqrt(2 -+ chi)|g>)/2.
std::array<Ket, 2> memory_basis(double phi1, double chi);

// 2x2 matrix whose columns are the dressed states carried to time t in the
// drive interaction picture: U1(t) U2(t) restricted to (up, down).
Matrix dressed_frame(const ModelParams& p, double t);
// Columns exp(-i H_d t)|+-~> in the frame of the memory Hamiltonian
// H_d = delta1 sigma_z/2 + omega1 (e^{i phi1} sigma_eg + h.c.).
Matrix memory_frame(const ModelParams& p, double t);

// R(t) = U1 U2 in bare coordinates with its generator H_I(t) = i dR/dt R^+.
FrameTransform nonadiabatic_frame(const ModelParams& p);
// R~(t) = exp(-i delta1 sigma_z t/2) exp(-i H_d t), from memory-frame to the
// interaction picture of the undressed drive.
FrameTransform memory_interaction_frame(const ModelParams& p);

// omega1 (s++ - s--) + (omega2/2)(e^{i(phi - 2 omega1 t)} s+- + h.c.)
Matrix interaction_drive_hamiltonian(const ModelParams& p, double t);

// --- Hamiltonians --------------------------------------------------------------------

// [g e^{-i delta_a t} a + omega1 e^{i(phi1 - delta1 t)} + omega2 e^{i(phi2 - delta2 t)}] sigma_eg + h.c.
Matrix build_h1(const ModelParams& p, double t);
// delta1 sigma_z/2 + omega1 (e^{i phi1} sigma_eg + h.c.) + [g e^{-i delta_a t} a sigma_eg + h.c.]
Matrix build_h1_memory(const ModelParams& p, double t);
// Samplers for the two functions above with the time-independent factors
// precomputed; parameters are validated once.
HamiltonianSampler h1_sampler(const ModelParams& p);
HamiltonianSampler h1_memory_sampler(const ModelParams& p);

// (g/2)(e^{i phi1} a^+ s_ud + e^{-i phi1} a s_du) on (up, down) (x) Fock.
Matrix build_h2_effective(const ModelParams& p);
// (g~/2)(e^{i phi1} a^+ s_+- + e^{-i phi1} a s_-+) on (+~, -~) (x) Fock.
Matrix build_h2_memory(const ModelParams& p);

// --- reservoir -----------------------------------------------------------------------

// g^2/Gamma or g~^2/Gamma. Throws DomainError when Gamma = 0.
double engineered_rate(const ModelParams& p, Branch branch);
double epsilon_closed_form(double rate_ratio, Branch branch);

double convention_factor(RateConvention c);

// Generator of the published Bloch equations on vec(rho) = (uu, du, ud, dd).
Matrix printed_bloch_generator(double gamma_eng, double gamma);

struct BlochState {
    Complex uu;
    Complex dd;
    Complex ud;
    Complex du;
};

// Published Bloch right-hand side. Throws DomainError unless uu + dd = 1
// (1e-9) and du = conj(ud) (1e-9).
BlochState bloch_ode_rhs(const BlochState& s, double gamma_eng, double gamma);

// Dressed-frame average of the sigma_ge dissipator (rate gamma, factor 1/2).
// The nonadiabatic frame carries two frequencies, 2 omega1 and omega2, so the
// average is taken over both phases independently.
Matrix averaged_emission_generator(const ModelParams& p, Branch branch, const AverageOptions& options = {});

// Coefficients of a two-level Liouvillian fragment in the form of the
// published equations: d uu/dt = source*dd - loss_up*uu,
// d ud/dt = -coherence*ud + cross*du.
struct DressedRates {
    double source = 0.0;
    double loss_up = 0.0;
    double coherence = 0.0;
    double cross = 0.0;
    double frequency_shift = 0.0;  // imaginary part of the ud diagonal
};
DressedRates dressed_rates(const Matrix& generator);

// Jump operator on (up, down) or (+~, -~) at engineered_rate, with spontaneous
// emission modelled as requested. printed_bloch makes the total generator
// equal to the published system regardless of the rate convention.
MasterEquation reduced_master_equation(const ModelParams& p, Branch branch, GammaModel gamma_model,
                                       RateConvention convention = RateConvention::as_printed);

// Nonadiabatic: diag(1 - eps, eps). Memory: adds eps/(1 - eps) on the
// off-diagonals and throws DomainError when that breaks positivity.
DensityMatrix asymptotic_state(Branch branch, double epsilon);

// cos(phi/2 - omega1 t)|e> + i e^{-i phi1} sin(phi/2 - omega1 t)|g>
Ket protected_state_sp1(const ModelParams& p, double t);
// (|+> + e^{-i(phi - 2 omega1 t)}|->)/sqrt 2: the same ray, in a gauge that
// returns to itself after one period pi/omega1.
Ket protected_state_sp1_cyclic(const ModelParams& p, double t);
// [sqrt(2 + chi)|e> + e^{-i(phi1 - delta1 t)} sqrt(2 - chi)|g>]/2
Ket protected_state_sp2(const ModelParams& p, double t);

// TL (x) Fock master equation: Hamiltonian, cavity decay at Gamma (factor
// 1/2) and optionally sigma_ge emission at gamma (factor 1/2) carried into
// the chosen frame. The memory "bare" frame is that of build_h1_memory.
MasterEquation full_system_master_equation(const ModelParams& p, Branch branch, ModelFrame frame,
                                           bool include_gamma);

struct EliminationComparison {
    std::vector<double> times;
    std::vector<double> trace_distance;
    double max_trace_distance = 0.0;  // over times >= 5/Gamma
    IntegrationStats full_stats;
    IntegrationStats reduced_stats;
};

// Reduced equation versus the dressed-frame TL (x) Fock model (cavity in
// vacuum initially), compared through the TL marginal on [0, horizon].
EliminationComparison compare_elimination(const ModelParams& p, Branch branch, const Ket& tl_state,
                                          RateConvention convention, double horizon, int samples = 201);

// H1 (or the memory H~1) against the effective Hamiltonian; psi0 is given in
// dressed (x) Fock coordinates.
EffectiveComparison compare_effective_model(const ModelParams& p, Branch branch, const Ket& psi0, double horizon,
                                            int samples = 201);

}  // namespace engres
