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

// Liouvillian assembly, fixed-step RK4 integration and steady-state solves.
//
// Every dissipative term is written
//
//     rate * convention_factor * (2 O rho O^+ - O^+ O rho - rho O^+ O)
//
// so both prefactor styles are explicit: convention_factor = 1/2 for the
// (Gamma/2)(2 a rho a^+ - ...) form and 1 for the Gamma_eng (2 s rho s^+ - ...)
// form. Superoperators act on column-stacked vec(rho).

#include "engres/quantum_core.hpp"

#include <functional>
#include <span>
#include <vector>

namespace engres {

using OperatorSampler = std::function<Matrix(double)>;

// Operator that is either constant or sampled as a function of time (s).
class TimeOperator {
public:
    TimeOperator() = default;
    TimeOperator(Matrix constant);  // NOLINT(google-explicit-constructor)
    TimeOperator(OperatorSampler sampler, Index dim);

    Matrix operator()(double t) const;
    bool is_constant() const { return !sampler_; }
    Index dim() const { return dim_; }

private:
    Matrix constant_;
    OperatorSampler sampler_;
    Index dim_ = 0;
};

struct LindbladTerm {
    double rate = 0.0;  // s^-1
    TimeOperator op;
    double convention_factor = 0.5;
};

class MasterEquation {
public:
    explicit MasterEquation(Index dim);

    MasterEquation& set_hamiltonian(TimeOperator h);
    MasterEquation& add_term(LindbladTerm term);
    // Constant dim^2 x dim^2 generator added verbatim to the Liouvillian.
    MasterEquation& add_generator(Matrix superop);

    Index dim() const { return dim_; }
    const std::vector<LindbladTerm>& terms() const { return terms_; }
    const std::vector<Matrix>& generators() const { return generators_; }
    bool is_time_independent() const;
    bool has_hamiltonian() const { return hamiltonian_.dim() != 0; }

    // Throws DomainError if the sample is not Hermitian within 1e-10 (relative).
    Matrix hamiltonian_at(double t) const;

private:
    Index dim_;
    TimeOperator hamiltonian_;
    std::vector<LindbladTerm> terms_;
    std::vector<Matrix> generators_;
};

// Superoperator of a single dissipative term (without the rate).
Matrix dissipator_superoperator(const Matrix& op, double convention_factor);

Matrix liouvillian_matrix(const MasterEquation& me, double t);

// d rho / dt assembled directly from the operators.
Matrix master_rhs(const MasterEquation& me, double t, const Matrix& rho);

// Frobenius norm of d rho / dt.
double residual(const MasterEquation& me, const DensityMatrix& rho, double t);

struct IntegrationStats {
    double step = 0.0;             // accepted internal step (s)
    long long substeps = 0;        // on the accepted pass
    int refinements = 0;           // number of step halvings performed
    double refinement_change = 0.0;
    double max_trace_drift = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    IntegrationStats stats;
};

struct EvolveOptions {
    double tolerance = 1e-8;     // max entry change allowed when halving the step
    int max_refinements = 12;
    double initial_step = 0.0;   // 0: 1/(50 * fastest scale)
};

// Classical RK4 with a fixed internal step, halved until the output states
// move by at most options.tolerance. Throws DivergenceError otherwise.
Trajectory evolve(const MasterEquation& me, const DensityMatrix& rho0, std::span<const double> t_grid,
                  const EvolveOptions& options = {});

// Fastest rate or angular frequency in me (s^-1), sampled at the given times.
double fastest_scale(const MasterEquation& me, std::span<const double> sample_times);

struct SteadyState {
    DensityMatrix rho;
    int null_dimension = 0;
    bool degenerate = false;
    double residual = 0.0;
};

// Null vector of the Liouvillian, trace-normalized. A multi-dimensional null
// space yields the projection of the maximally mixed state onto it.
SteadyState steady_state(const MasterEquation& me);

}  // namespace engres
