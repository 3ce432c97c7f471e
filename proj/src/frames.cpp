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

#include "engres/frames.hpp"

#include "engres/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace engres {

namespace {

Matrix midpoint_product(const HamiltonianSampler& h, double t0, double t1, long long n) {
    const double dt = (t1 - t0) / static_cast<double>(n);
    Matrix u;
    for (long long k = 0; k < n; ++k) {
        const Matrix step = expm_hermitian_generator(h(t0 + (static_cast<double>(k) + 0.5) * dt), dt);
        u = k == 0 ? step : Matrix(step * u);
    }
    return u;
}

}  // namespace

Matrix time_ordered_propagator(const HamiltonianSampler& h, double t0, double t1, int steps,
                               const PropagatorOptions& options) {
    if (steps < 1) throw DomainError("time_ordered_propagator: steps must be >= 1");
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("time_ordered_propagator: non-finite time");
    if (t0 == t1) return identity(h(t0).rows());
    long long n = steps;
    Matrix coarse = midpoint_product(h, t0, t1, n);
    double change = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.max_refinements; ++r) {
        n *= 2;
        Matrix fine = midpoint_product(h, t0, t1, n);
        change = max_abs(fine - coarse);
        if (change <= options.tolerance) return fine;
        coarse = std::move(fine);
    }
    throw DivergenceError("time_ordered_propagator: step doubling did not converge", change);
}

Matrix conjugate_operator(const Matrix& r, const Matrix& o) {
    if (r.rows() != r.cols() || r.cols() != o.rows() || o.rows() != o.cols()) {
        throw DomainError("conjugate_operator: dimension mismatch");
    }
    return r * o * r.adjoint();
}

// --- averaging ---------------------------------------------------------------------

Matrix average_superoperator(const std::function<Matrix(double)>& superop, double period,
                             const AverageOptions& options) {
    if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("average_superoperator: period must be positive");
    auto mean = [&](int n) {
        Matrix acc = superop(0.0);
        for (int k = 1; k < n; ++k) acc += superop(period * static_cast<double>(k) / static_cast<double>(n));
        return Matrix(acc / static_cast<double>(n));
    };
    int n = std::max(options.min_points, 2);
    Matrix coarse = mean(n);
    double change = std::numeric_limits<double>::infinity();
    while (2 * n <= options.max_points) {
        n *= 2;
        Matrix fine = mean(n);
        change = max_abs(fine - coarse);
        if (change <= options.tolerance * std::max(1.0, max_abs(fine))) return fine;
        coarse = std::move(fine);
    }
    throw DivergenceError("average_superoperator: grid doubling did not converge", change);
}

Matrix transformed_dissipator_average(const LindbladTerm& term, double period, const AverageOptions& options) {
    if (term.op.is_constant()) return term.rate * dissipator_superoperator(term.op(0.0), term.convention_factor);
    return average_superoperator(
        [&term](double t) { return Matrix(term.rate * dissipator_superoperator(term.op(t), term.convention_factor)); },
        period, options);
}

// --- ket evolution -------------------------------------------------------------------

namespace {

std::vector<Vector> ket_pass(const HamiltonianSampler& h, const Vector& psi0, std::span<const double> t_grid,
                             double step) {
    std::vector<Vector> out;
    out.reserve(t_grid.size());
    out.push_back(psi0);
    Vector psi = psi0;
    auto rhs = [&h](double t, const Vector& v) { return Vector(-kI * (h(t) * v)); };
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double t0 = t_grid[i - 1];
        const double dt = t_grid[i] - t0;
        const long long n = std::max<long long>(1, static_cast<long long>(std::ceil(dt / step - 1e-9)));
        const double hh = dt / static_cast<double>(n);
        for (long long k = 0; k < n; ++k) {
            const double t = t0 + static_cast<double>(k) * hh;
            const Vector k1 = rhs(t, psi);
            const Vector k2 = rhs(t + 0.5 * hh, psi + (0.5 * hh) * k1);
            const Vector k3 = rhs(t + 0.5 * hh, psi + (0.5 * hh) * k2);
            const Vector k4 = rhs(t + hh, psi + hh * k3);
            psi += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(psi);
    }
    return out;
}

}  // namespace

std::vector<Vector> evolve_ket(const HamiltonianSampler& h, const Vector& psi0, std::span<const double> t_grid,
                               const KetEvolveOptions& options) {
    if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("evolve_ket: time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("evolve_ket: time grid must be strictly increasing");
    }
    double scale = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, t_grid.size() / 64);
    for (std::size_t i = 0; i < t_grid.size(); i += stride) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h(t_grid[i]), Eigen::EigenvaluesOnly);
        scale = std::max(scale, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    double step = scale > 0.0 ? 1.0 / (50.0 * scale) : std::max(t_grid.back(), 1.0);

    std::vector<Vector> coarse = ket_pass(h, psi0, t_grid, step);
    double change = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.max_refinements; ++r) {
        step *= 0.5;
        std::vector<Vector> fine = ket_pass(h, psi0, t_grid, step);
        change = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) change = std::max(change, (fine[i] - coarse[i]).cwiseAbs().maxCoeff());
        if (change <= options.tolerance) return fine;
        coarse = std::move(fine);
    }
    throw DivergenceError("evolve_ket: step refinement did not converge", change);
}

EffectiveComparison compare_effective(const HamiltonianSampler& full, const HamiltonianSampler& effective,
                                      const Ket& psi0, double horizon, const CompareOptions& options) {
    if (!(horizon > 0.0)) throw DomainError("compare_effective: horizon must be positive");
    if (options.samples < 2) throw DomainError("compare_effective: need at least two samples");

    EffectiveComparison out;
    out.times.resize(static_cast<std::size_t>(options.samples));
    for (int k = 0; k < options.samples; ++k) out.times[k] = horizon * k / (options.samples - 1);

    auto to_full = [&options](double t, const Vector& v) {
        return options.frame ? Vector(options.frame(t) * v) : v;
    };
    const Vector full0 = to_full(0.0, psi0.amplitudes());
    if (full(0.0).rows() != full0.size()) throw DomainError("compare_effective: generator dimensions differ");

    const auto full_states = evolve_ket(full, full0, out.times, options.integration);
    const auto eff_states = evolve_ket(effective, psi0.amplitudes(), out.times, options.integration);

    out.fidelity.reserve(out.times.size());
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        const Vector a = full_states[k].normalized();
        const Vector b = to_full(out.times[k], eff_states[k]).normalized();
        const double f = std::norm(a.dot(b));
        out.fidelity.push_back(f);
        out.worst_fidelity = std::min(out.worst_fidelity, f);
    }
    return out;
}

}  // namespace engres
