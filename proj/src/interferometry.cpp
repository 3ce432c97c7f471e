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

#include "engres/interferometry.hpp"

#include "engres/error.hpp"

#include <cmath>

namespace engres {

namespace {

// 0 (+) op on (a, e, g)
Matrix embed(const Matrix& op) {
    Matrix m = Matrix::Zero(3, 3);
    m.bottomRightCorner(2, 2) = op;
    return m;
}

Vector embed(const Vector& v) {
    Vector out = Vector::Zero(3);
    out.tail(2) = v;
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

double population_inversion_reference(double omega1, double omega2, double t) {
    return 0.5 * std::cos((2.0 * omega1 + omega2) * t);
}

InterferometerResult run_interferometer(const ThreeLevelConfig& cfg) {
    const ModelParams& p = cfg.params;
    p.validate();
    if (!(p.omega1 > 0.0)) throw DomainError("interferometer: omega1 must be positive");
    if (cfg.samples < 3) throw DomainError("interferometer: need at least three samples");
    const double cycle = M_PI / p.omega1;
    const double t_end = cfg.t_end > 0.0 ? cfg.t_end : 4.0 * cycle;

    const FrameTransform frame = nonadiabatic_frame(p);
    const auto ud = updown_basis(p.phi1, p.phi());
    const Matrix jump_bare = outer(ud[0], ud[1]);
    const double rate = engineered_rate(p, Branch::nonadiabatic);

    MasterEquation me(3);
    me.set_hamiltonian(TimeOperator([frame](double t) { return embed(frame.generator(t)); }, 3));
    me.add_term(LindbladTerm{rate,
                             TimeOperator(
                                 [frame, jump_bare](double t) {
                                     const Matrix r = frame.propagator(t);
                                     return embed(Matrix(r * jump_bare * r.adjoint()));
                                 },
                                 3),
                             0.5});
    if (cfg.include_l_tl && p.gamma > 0.0) {
        Matrix sge = Matrix::Zero(2, 2);
        sge(1, 0) = 1.0;
        me.add_term(LindbladTerm{p.gamma, TimeOperator(embed(sge)), 0.5});
    }

    Vector psi0 = embed(ud[0].amplitudes());
    psi0(0) = 1.0;
    const Ket start = Ket::normalize(psi0);

    InterferometerResult out;
    std::vector<double> grid(static_cast<std::size_t>(cfg.samples));
    for (int k = 0; k < cfg.samples; ++k) grid[k] = t_end * k / (cfg.samples - 1);
    out.trajectory = evolve(me, DensityMatrix::pure(start), grid);

    double previous = 0.0;
    double c0 = 0.0;
    double c_cycle = -1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const Matrix& rho = out.trajectory.states[k].matrix();
        const Vector up = embed(protected_state_sp1_cyclic(p, t).amplitudes());
        const Matrix r = frame.propagator(t);
        const Vector up_t = embed(Vector(r * ud[0].amplitudes()));
        const Vector down_t = embed(Vector(r * ud[1].amplitudes()));
        const double aa = rho(0, 0).real();
        const double pu = up_t.dot(rho * up_t).real();
        const double pd = down_t.dot(rho * down_t).real();
        const Complex c = up.dot(rho.col(0));
        out.rho_aa.push_back(aa);
        out.rho_up.push_back(pu);
        out.rho_down.push_back(pd);
        out.coherence.push_back(c);
        out.max_probability_error = std::max(out.max_probability_error, std::abs(aa + pu + pd - 1.0));

        double phi = -std::arg(c);
        if (k > 0) phi += 2.0 * M_PI * std::round((previous - phi) / (2.0 * M_PI));
        out.phase.push_back(phi);
        previous = phi;
        out.reference.push_back(population_inversion_reference(p.omega1, p.omega2, t));

        if (k == 0) c0 = std::abs(c);
        if (c_cycle < 0.0 && t >= cycle) c_cycle = std::abs(c);
    }
    if (c_cycle < 0.0) c_cycle = std::abs(out.coherence.back());
    out.coherence_decay_first_cycle = c0 > 0.0 ? 1.0 - c_cycle / c0 : 0.0;
    out.slope = least_squares_slope(grid, out.phase);
    out.expected_slope = p.omega1 + 0.5 * p.omega2;
    out.reference_frequency = 2.0 * p.omega1 + p.omega2;
    return out;
}

}  // namespace engres
