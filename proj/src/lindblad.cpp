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

#include "engres/lindblad.hpp"

#include "engres/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace engres {

// --- TimeOperator ---------------------------------------------------------------

TimeOperator::TimeOperator(Matrix constant) : constant_(std::move(constant)), dim_(constant_.rows()) {
    if (constant_.rows() != constant_.cols()) throw DomainError("TimeOperator: operator must be square");
}

TimeOperator::TimeOperator(OperatorSampler sampler, Index dim) : sampler_(std::move(sampler)), dim_(dim) {
    if (!sampler_) throw DomainError("TimeOperator: empty sampler");
}

Matrix TimeOperator::operator()(double t) const {
    if (!sampler_) return constant_;
    Matrix m = sampler_(t);
    if (m.rows() != dim_ || m.cols() != dim_) throw DomainError("TimeOperator: sampler returned wrong dimension");
    return m;
}

// --- MasterEquation ---------------------------------------------------------------

MasterEquation::MasterEquation(Index dim) : dim_(dim) {
    if (dim <= 0) throw DomainError("MasterEquation: dimension must be positive");
}

MasterEquation& MasterEquation::set_hamiltonian(TimeOperator h) {
    if (h.dim() != dim_) throw DomainError("MasterEquation: Hamiltonian dimension mismatch");
    hamiltonian_ = std::move(h);
    return *this;
}

MasterEquation& MasterEquation::add_term(LindbladTerm term) {
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate)) {
        throw DomainError("LindbladTerm: rate must be finite and >= 0, got " + std::to_string(term.rate));
    }
    if (!(term.convention_factor > 0.0) || !std::isfinite(term.convention_factor)) {
        throw DomainError("LindbladTerm: convention factor must be finite and positive");
    }
    if (term.op.dim() != dim_) throw DomainError("LindbladTerm: operator dimension mismatch");
    terms_.push_back(std::move(term));
    return *this;
}

MasterEquation& MasterEquation::add_generator(Matrix superop) {
    if (superop.rows() != dim_ * dim_ || superop.cols() != dim_ * dim_) {
        throw DomainError("MasterEquation: generator must be dim^2 x dim^2");
    }
    generators_.push_back(std::move(superop));
    return *this;
}

bool MasterEquation::is_time_independent() const {
    if (has_hamiltonian() && !hamiltonian_.is_constant()) return false;
    return std::all_of(terms_.begin(), terms_.end(), [](const LindbladTerm& t) { return t.op.is_constant(); });
}

Matrix MasterEquation::hamiltonian_at(double t) const {
    if (!has_hamiltonian()) return Matrix::Zero(dim_, dim_);
    Matrix h = hamiltonian_(t);
    const double err = hermiticity_error(h);
    if (!(err <= 1e-10 * std::max(1.0, max_abs(h)))) {
        throw DomainError("MasterEquation: Hamiltonian sample at t=" + std::to_string(t) +
                          " is not Hermitian (max|H - H^+| = " + std::to_string(err) + ")");
    }
    return h;
}

// --- superoperators ---------------------------------------------------------------

Matrix dissipator_superoperator(const Matrix& op, double convention_factor) {
    const Index d = op.rows();
    const Matrix id = identity(d);
    const Matrix odo = op.adjoint() * op;
    return convention_factor * (2.0 * kron(op.conjugate(), op) - kron(id, odo) - kron(odo.transpose(), id));
}

Matrix liouvillian_matrix(const MasterEquation& me, double t) {
    const Index d = me.dim();
    const Matrix id = identity(d);
    const Matrix h = me.hamiltonian_at(t);
    Matrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& term : me.terms()) {
        if (term.rate == 0.0) continue;
        l += term.rate * dissipator_superoperator(term.op(t), term.convention_factor);
    }
    for (const auto& g : me.generators()) l += g;
    return l;
}

Matrix master_rhs(const MasterEquation& me, double t, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    if (me.has_hamiltonian()) {
        const Matrix h = me.hamiltonian_at(t);
        out.noalias() = -kI * (h * rho - rho * h);
    }
    for (const auto& term : me.terms()) {
        if (term.rate == 0.0) continue;
        const Matrix o = term.op(t);
        const Matrix od = o.adjoint();
        const Matrix odo = od * o;
        out += (term.rate * term.convention_factor) * (2.0 * o * rho * od - odo * rho - rho * odo);
    }
    for (const auto& g : me.generators()) out += unvec(g * vec(rho), rho.rows());
    return out;
}

double residual(const MasterEquation& me, const DensityMatrix& rho, double t) {
    if (rho.dim() != me.dim()) throw DomainError("residual: dimension mismatch");
    return master_rhs(me, t, rho.matrix()).norm();
}

// --- integration ---------------------------------------------------------------------

double fastest_scale(const MasterEquation& me, std::span<const double> sample_times) {
    std::vector<double> ts;
    if (sample_times.empty()) {
        ts.push_back(0.0);
    } else {
        const std::size_t n = sample_times.size();
        const std::size_t stride = std::max<std::size_t>(1, n / 64);
        for (std::size_t i = 0; i < n; i += stride) ts.push_back(sample_times[i]);
        ts.push_back(sample_times.back());
    }
    double h_scale = 0.0;
    double rate_scale = 0.0;
    for (double t : ts) {
        if (me.has_hamiltonian()) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(me.hamiltonian_at(t), Eigen::EigenvaluesOnly);
            h_scale = std::max(h_scale, es.eigenvalues().cwiseAbs().maxCoeff());
        }
        for (const auto& term : me.terms()) {
            const double n = spectral_norm(term.op(t));
            rate_scale = std::max(rate_scale, 2.0 * term.convention_factor * term.rate * n * n);
        }
        if (me.is_time_independent()) break;
    }
    for (const auto& g : me.generators()) rate_scale = std::max(rate_scale, spectral_norm(g));
    return h_scale + rate_scale;
}

namespace {

void validate_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw DomainError("evolve: empty time grid");
    if (t_grid.front() != 0.0) throw DomainError("evolve: time grid must start at 0");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i])) throw DomainError("evolve: non-finite time in grid");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("evolve: time grid must be strictly increasing");
    }
}

long long substeps_for(double dt, double h) {
    return std::max<long long>(1, static_cast<long long>(std::ceil(dt / h - 1e-9)));
}

// RK4 step matrix for a constant generator, and its integer powers.
class ConstantPropagator {
public:
    explicit ConstantPropagator(Matrix l) : l_(std::move(l)) {}

    const Matrix& power(double h, long long n) {
        if (n != cached_n_ || std::abs(h - cached_h_) > 1e-14 * h) {
            const Matrix step = rk4_step(h);
            Matrix result = identity(l_.rows());
            Matrix base = step;
            for (long long k = n; k > 0; k >>= 1) {
                if (k & 1) result = base * result;
                if (k > 1) base = base * base;
            }
            cached_ = std::move(result);
            cached_h_ = h;
            cached_n_ = n;
        }
        return cached_;
    }

private:
    Matrix rk4_step(double h) const {
        const Index n = l_.rows();
        const Matrix hl = h * l_;
        // I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, Horner form
        Matrix p = identity(n) + hl / 4.0;
        p = identity(n) + (hl * p) / 3.0;
        p = identity(n) + (hl * p) / 2.0;
        p = identity(n) + hl * p;
        return p;
    }

    Matrix l_;
    Matrix cached_;
    double cached_h_ = -1.0;
    long long cached_n_ = -1;
};

struct Pass {
    std::vector<Matrix> states;
    long long substeps = 0;
};

Pass run_pass(const MasterEquation& me, const Matrix& rho0, std::span<const double> t_grid, double h,
              ConstantPropagator* constant) {
    Pass out;
    out.states.reserve(t_grid.size());
    out.states.push_back(rho0);
    Matrix rho = rho0;
    const Index d = rho0.rows();
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double t0 = t_grid[i - 1];
        const double dt = t_grid[i] - t0;
        const long long n = substeps_for(dt, h);
        const double hh = dt / static_cast<double>(n);
        out.substeps += n;
        if (constant != nullptr) {
            rho = unvec(constant->power(hh, n) * vec(rho), d);
        } else {
            for (long long k = 0; k < n; ++k) {
                const double t = t0 + static_cast<double>(k) * hh;
                const Matrix k1 = master_rhs(me, t, rho);
                const Matrix k2 = master_rhs(me, t + 0.5 * hh, rho + (0.5 * hh) * k1);
                const Matrix k3 = master_rhs(me, t + 0.5 * hh, rho + (0.5 * hh) * k2);
                const Matrix k4 = master_rhs(me, t + hh, rho + hh * k3);
                rho += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        out.states.push_back(rho);
    }
    return out;
}

double max_change(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs(a[i] - b[i]));
    return worst;
}

}  // namespace

Trajectory evolve(const MasterEquation& me, const DensityMatrix& rho0, std::span<const double> t_grid,
                  const EvolveOptions& options) {
    validate_grid(t_grid);
    if (rho0.dim() != me.dim()) throw DomainError("evolve: initial state dimension mismatch");
    rho0.require_positive(1e-8);

    double h = options.initial_step;
    if (!(h > 0.0)) {
        const double scale = fastest_scale(me, t_grid);
        h = scale > 0.0 ? 1.0 / (50.0 * scale) : std::max(t_grid.back(), 1.0);
    }

    std::optional<ConstantPropagator> constant;
    if (me.is_time_independent()) constant.emplace(liouvillian_matrix(me, 0.0));
    ConstantPropagator* cp = constant ? &*constant : nullptr;

    Pass coarse = run_pass(me, rho0.matrix(), t_grid, h, cp);
    double change = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= options.max_refinements; ++r) {
        h *= 0.5;
        Pass fine = run_pass(me, rho0.matrix(), t_grid, h, cp);
        change = max_change(coarse.states, fine.states);
        if (!std::isfinite(change)) break;
        if (change <= options.tolerance) {
            Trajectory traj;
            traj.times.assign(t_grid.begin(), t_grid.end());
            traj.stats.step = h;
            traj.stats.substeps = fine.substeps;
            traj.stats.refinements = r;
            traj.stats.refinement_change = change;
            traj.stats.min_eigenvalue = std::numeric_limits<double>::infinity();
            traj.states.reserve(fine.states.size());
            for (auto& m : fine.states) {
                auto rho = DensityMatrix::unchecked(std::move(m));
                traj.stats.max_trace_drift = std::max(traj.stats.max_trace_drift, std::abs(rho.trace() - 1.0));
                traj.stats.max_hermiticity_error = std::max(traj.stats.max_hermiticity_error, rho.hermiticity_error());
                traj.stats.min_eigenvalue = std::min(traj.stats.min_eigenvalue, rho.min_eigenvalue());
                traj.states.push_back(std::move(rho));
            }
            return traj;
        }
        coarse = std::move(fine);
    }
    throw DivergenceError("evolve: step refinement did not converge", change);
}

// --- steady state ---------------------------------------------------------------------

SteadyState steady_state(const MasterEquation& me) {
    if (!me.is_time_independent()) throw DomainError("steady_state: master equation is time dependent");
    const Index d = me.dim();
    const Matrix l = liouvillian_matrix(me, 0.0);
    Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, s(0));
    Index null_dim = 0;
    for (Index k = s.size() - 1; k >= 0 && s(k) <= tol; --k) ++null_dim;
    if (null_dim == 0) throw StructuralError("steady_state: Liouvillian has no null vector");

    const Matrix basis = svd.matrixV().rightCols(null_dim);
    const Vector mixed = vec(identity(d) / static_cast<double>(d));
    Vector v = null_dim == 1 ? Vector(basis.col(0)) : Vector(basis * (basis.adjoint() * mixed));
    Matrix rho = unvec(v, d);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) throw StructuralError("steady_state: null space holds no trace-class state");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();

    SteadyState out{DensityMatrix(rho), static_cast<int>(null_dim), null_dim > 1, 0.0};
    out.residual = (l * vec(out.rho.matrix())).norm();
    return out;
}

}  // namespace engres
