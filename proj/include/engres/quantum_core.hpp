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

// Dense complex linear algebra and quantum-state primitives.
//
// Operators are Eigen::MatrixXcd. Composite spaces use the standard Kronecker
// ordering kron(A, B) with A acting on the left (slow) factor.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace engres {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Normalized pure state.
class Ket {
public:
    // Throws DomainError unless |norm - 1| <= 1e-10.
    explicit Ket(Vector amplitudes);

    // Rescales a nonzero vector to unit norm.
    static Ket normalize(const Vector& v);
    static Ket basis(Index dim, Index k);

    Index dim() const { return amps_.size(); }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](Index k) const { return amps_(k); }

    Complex overlap(const Ket& other) const;  // <this|other>
    Matrix projector() const;

    Ket operator*(Complex phase) const;

private:
    Vector amps_;
};

Ket tensor(const Ket& a, const Ket& b);

// Hermitian, unit-trace state. Construction checks the trace (1e-9) and
// Hermiticity (1e-10); negativity is only reported via min_eigenvalue().
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m);

    static DensityMatrix pure(const Ket& psi);
    static DensityMatrix maximally_mixed(Index dim);

    // Skips the trace and Hermiticity checks. Used by integrators that
    // report their own invariant diagnostics.
    static DensityMatrix unchecked(Matrix m);

    Index dim() const { return rho_.rows(); }
    const Matrix& matrix() const { return rho_; }
    Complex operator()(Index r, Index c) const { return rho_(r, c); }

    Complex trace() const { return rho_.trace(); }
    double purity() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

    // Throws DomainError when min_eigenvalue() < -tol.
    void require_positive(double tol = 1e-8) const;

private:
    struct NoCheck {};
    DensityMatrix(Matrix m, NoCheck) : rho_(std::move(m)) {}

    Matrix rho_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

Matrix identity(Index dim);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix outer(const Ket& a, const Ket& b);  // |a><b|

// max |A - A^dagger|
double hermiticity_error(const Matrix& a);
bool is_hermitian(const Matrix& a, double rel_tol = 1e-12);
double max_abs(const Matrix& a);
double spectral_norm(const Matrix& a);

// exp(-i H t) through the eigendecomposition of H. Throws DomainError for
// non-Hermitian input (relative tolerance 1e-12 of max|H|).
Matrix expm_hermitian_generator(const Matrix& h, double t);

// (n_max + 1)-dimensional lowering operator.
Matrix fock_annihilation(int n_max);

// <psi|rho|psi>
double fidelity(const DensityMatrix& rho, const Ket& psi);

// Coordinates of a qubit state in the ordered basis (b0, b1):
// x = 2 Re rho01, y = -2 Im rho01, z = rho00 - rho11.
BlochVector bloch_vector(const DensityMatrix& rho, const Ket& b0, const Ket& b1);
BlochVector bloch_vector(const Ket& psi, const Ket& b0, const Ket& b1);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Tr_B of a state on A (x) B.
DensityMatrix partial_trace_second(const DensityMatrix& rho, Index dim_a, Index dim_b);

// Column-stacking vectorization.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index dim);

}  // namespace engres
