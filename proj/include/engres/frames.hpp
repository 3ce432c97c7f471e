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

// Time-ordered frame propagators, frame conjugation and the time-averaging
// oracle used to validate rotating-wave reductions.

#include "engres/lindblad.hpp"
#include "engres/quantum_core.hpp"

#include <functional>
#include <span>
#include <vector>

namespace engres {

using HamiltonianSampler = std::function<Matrix(double)>;

// R(t) together with the Hermitian generator H(t) such that i dR/dt = H(t) R.
struct FrameTransform {
    OperatorSampler propagator;
    HamiltonianSampler generator;
};

struct PropagatorOptions {
    // The midpoint rule is second order, so the remaining error is about a
    // third of the last doubling change.
    double tolerance = 1e-10;
    int max_refinements = 16;
};

// T exp(-i int_{t0}^{t1} H dt') as a product of midpoint exponentials, latest
// time leftmost. The step count is doubled (starting at `steps`) until one
// doubling changes the result by at most options.tolerance.
Matrix time_ordered_propagator(const HamiltonianSampler& h, double t0, double t1, int steps,
                               const PropagatorOptions& options = {});
inline Matrix time_ordered_propagator(const HamiltonianSampler& h, double t, int steps,
                                      const PropagatorOptions& options = {}) {
    return time_ordered_propagator(h, 0.0, t, steps, options);
}

// R O R^+
Matrix conjugate_operator(const Matrix& r, const Matrix& o);

struct AverageOptions {
    int min_points = 256;
    int max_points = 1 << 16;
    double tolerance = 1e-10;  // relative to max|average|
};

// Uniform-grid mean of a periodic superoperator-valued function over one
// period; the grid is doubled until the mean is stable.
Matrix average_superoperator(const std::function<Matrix(double)>& superop, double period,
                             const AverageOptions& options = {});

// Period average of rate * dissipator(op(t)). The superoperator is averaged,
// not the operator, so cross terms between frequency components survive
// whenever they are resonant.
Matrix transformed_dissipator_average(const LindbladTerm& term, double period, const AverageOptions& options = {});

struct KetEvolveOptions {
    double tolerance = 1e-8;
    int max_refinements = 14;
};

// RK4 solution of i d psi/dt = H(t) psi on t_grid (starting at 0), step halved
// until the sampled kets move by at most options.tolerance.
std::vector<Vector> evolve_ket(const HamiltonianSampler& h, const Vector& psi0, std::span<const double> t_grid,
                               const KetEvolveOptions& options = {});

struct EffectiveComparison {
    std::vector<double> times;
    std::vector<double> fidelity;
    double worst_fidelity = 1.0;
};

struct CompareOptions {
    int samples = 201;
    // Maps effective-frame coordinates into full-frame coordinates at time t.
    // Identity when empty.
    OperatorSampler frame;
    KetEvolveOptions integration;
};

// Evolves psi0 (effective-frame coordinates) under both generators and
// records |<psi_full|psi_eff>|^2 on a uniform grid over [0, horizon].
EffectiveComparison compare_effective(const HamiltonianSampler& full, const HamiltonianSampler& effective,
                                      const Ket& psi0, double horizon, const CompareOptions& options = {});

}  // namespace engres
