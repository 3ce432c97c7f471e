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

#include "engres/quantum_core.hpp"

#include "engres/error.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace engres {

namespace {

std::string dims(Index r, Index c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DomainError(std::string(what) + ": expected a nonempty square matrix, got " +
                          dims(m.rows(), m.cols()));
    }
}

}  // namespace

// --- Ket --------------------------------------------------------------------

Ket::Ket(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw DomainError("Ket: empty amplitude vector");
    const double n = amps_.norm();
    if (!(std::abs(n - 1.0) <= 1e-10)) {
        throw DomainError("Ket: norm " + std::to_string(n) + " is not 1 within 1e-10");
    }
}

Ket Ket::normalize(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("Ket::normalize: zero or non-finite vector");
    return Ket(v / n);
}

Ket Ket::basis(Index dim, Index k) {
    if (k < 0 || k >= dim) throw DomainError("Ket::basis: index out of range");
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return Ket(std::move(v));
}

Complex Ket::overlap(const Ket& other) const {
    if (other.dim() != dim()) throw DomainError("Ket::overlap: dimension mismatch");
    return amps_.dot(other.amps_);  // conjugates the left operand
}

Matrix Ket::projector() const { return amps_ * amps_.adjoint(); }

Ket Ket::operator*(Complex phase) const { return Ket::normalize(amps_ * phase); }

Ket tensor(const Ket& a, const Ket& b) {
    Vector v(a.dim() * b.dim());
    for (Index i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
    return Ket::normalize(v);
}

// --- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m) : rho_(std::move(m)) {
    require_square(rho_, "DensityMatrix");
    const Complex tr = rho_.trace();
    if (!(std::abs(tr - 1.0) <= 1e-9)) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr << " differs from 1 by more than 1e-9";
        throw DomainError(os.str());
    }
    const double herm = engres::hermiticity_error(rho_);
    if (!(herm <= 1e-10)) {
        throw DomainError("DensityMatrix: not Hermitian, max|rho - rho^+| = " + std::to_string(herm));
    }
}

DensityMatrix DensityMatrix::pure(const Ket& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
    if (dim <= 0) throw DomainError("DensityMatrix::maximally_mixed: dim must be positive");
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::unchecked(Matrix m) { return DensityMatrix(std::move(m), NoCheck{}); }

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_error() const { return engres::hermiticity_error(rho_); }

double DensityMatrix::min_eigenvalue() const {
    const Matrix h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::require_positive(double tol) const {
    const double lo = min_eigenvalue();
    if (lo < -tol) {
        throw DomainError("DensityMatrix: smallest eigenvalue " + std::to_string(lo) + " below -" +
                          std::to_string(tol));
    }
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

// --- linear algebra -------------------------------------------------------------

Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Matrix outer(const Ket& a, const Ket& b) { return a.amplitudes() * b.amplitudes().adjoint(); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(a - a.adjoint());
}

bool is_hermitian(const Matrix& a, double rel_tol) {
    if (a.rows() != a.cols()) return false;
    return hermiticity_error(a) <= rel_tol * std::max(1.0, max_abs(a));
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix expm_hermitian_generator(const Matrix& h, double t) {
    require_square(h, "expm_hermitian_generator");
    const double err = hermiticity_error(h);
    if (!(err <= 1e-12 * std::max(1.0, max_abs(h)))) {
        throw DomainError("expm_hermitian_generator: generator is not Hermitian, max|H - H^+| = " +
                          std::to_string(err));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const Eigen::VectorXd& w = es.eigenvalues();
    Vector phases(w.size());
    for (Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (w(k) * t));
    const Matrix& v = es.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

Matrix fock_annihilation(int n_max) {
    if (n_max < 1) throw DomainError("fock_annihilation: n_max must be >= 1, got " + std::to_string(n_max));
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// --- states ---------------------------------------------------------------------

double fidelity(const DensityMatrix& rho, const Ket& psi) {
    if (rho.dim() != psi.dim()) {
        throw DomainError("fidelity: state dimension " + std::to_string(rho.dim()) +
                          " does not match target dimension " + std::to_string(psi.dim()));
    }
    const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
    return f.real();
}

namespace {

void require_orthonormal_pair(const Ket& b0, const Ket& b1, Index dim) {
    if (b0.dim() != dim || b1.dim() != dim) throw DomainError("bloch_vector: basis dimension mismatch");
    if (std::abs(b0.overlap(b1)) > 1e-10) throw DomainError("bloch_vector: basis is not orthonormal");
}

BlochVector bloch_from(Complex r00, Complex r11, Complex r01) {
    return {2.0 * r01.real(), -2.0 * r01.imag(), (r00 - r11).real()};
}

}  // namespace

BlochVector bloch_vector(const DensityMatrix& rho, const Ket& b0, const Ket& b1) {
    require_orthonormal_pair(b0, b1, rho.dim());
    const Vector& u = b0.amplitudes();
    const Vector& v = b1.amplitudes();
    const Matrix& m = rho.matrix();
    return bloch_from(u.dot(m * u), v.dot(m * v), u.dot(m * v));
}

BlochVector bloch_vector(const Ket& psi, const Ket& b0, const Ket& b1) {
    require_orthonormal_pair(b0, b1, psi.dim());
    const Complex c0 = b0.overlap(psi);
    const Complex c1 = b1.overlap(psi);
    return bloch_from(std::norm(c0), std::norm(c1), c0 * std::conj(c1));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DomainError("trace_distance: dimension mismatch");
    const Matrix d = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix partial_trace_second(const DensityMatrix& rho, Index dim_a, Index dim_b) {
    if (dim_a * dim_b != rho.dim()) throw DomainError("partial_trace_second: dimension mismatch");
    Matrix out = Matrix::Zero(dim_a, dim_a);
    const Matrix& m = rho.matrix();
    for (Index i = 0; i < dim_a; ++i)
        for (Index j = 0; j < dim_a; ++j)
            for (Index k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return DensityMatrix::unchecked(std::move(out));
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Index dim) {
    if (v.size() != dim * dim) throw DomainError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

}  // namespace engres
