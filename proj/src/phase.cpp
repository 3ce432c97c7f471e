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

#include "engres/phase.hpp"

#include "engres/error.hpp"

#include <cmath>

namespace engres {

KetTrajectory sample_path(const KetPath& path, double t_end, int samples) {
    if (samples < 2) throw DomainError("sample_path: need at least two samples");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("sample_path: t_end must be positive");
    KetTrajectory traj;
    traj.times.reserve(samples);
    traj.states.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double t = k == samples - 1 ? t_end : t_end * k / (samples - 1);
        traj.times.push_back(t);
        traj.states.push_back(path(t));
    }
    return traj;
}

namespace {

void check_trajectory(const KetTrajectory& traj) {
    if (traj.states.size() < 2 || traj.states.size() != traj.times.size()) {
        throw DomainError("trajectory needs at least two samples with matching times");
    }
}

}  // namespace

double dynamic_phase(const KetTrajectory& traj, const HamiltonianSampler& h) {
    check_trajectory(traj);
    std::vector<double> energy;
    energy.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const Vector& v = traj.states[k].amplitudes();
        energy.push_back(v.dot(h(traj.times[k]) * v).real());
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < energy.size(); ++k) {
        integral += 0.5 * (energy[k] + energy[k - 1]) * (traj.times[k] - traj.times[k - 1]);
    }
    return -integral;
}

GeometricPhase geometric_phase(const KetTrajectory& traj) {
    check_trajectory(traj);
    auto step_arg = [](const Ket& a, const Ket& b) {
        const Complex o = a.overlap(b);
        if (std::abs(o) < 1e-6) throw DomainError("geometric_phase: ill-conditioned path (vanishing overlap)");
        return std::arg(o);
    };
    double sum = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) sum += step_arg(traj.states[k - 1], traj.states[k]);
    sum += step_arg(traj.states.back(), traj.states.front());

    GeometricPhase g;
    g.unwrapped = -sum;
    const double two_pi = 2.0 * M_PI;
    g.wrapped = g.unwrapped - two_pi * std::ceil(g.unwrapped / two_pi);
    if (g.wrapped <= -two_pi) g.wrapped += two_pi;
    return g;
}

std::vector<BlochSample> export_bloch_path(const KetTrajectory& traj, const Ket& b0, const Ket& b1) {
    check_trajectory(traj);
    std::vector<BlochSample> out;
    out.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const BlochVector b = bloch_vector(traj.states[k], b0, b1);
        out.push_back({traj.times[k], b.x, b.y, b.z});
    }
    return out;
}

PhaseRecord phase_cycle(const KetPath& path, const HamiltonianSampler& h, double cycle_time,
                        const PhaseOptions& options) {
    int n = options.initial_samples;
    auto evaluate = [&](int samples) {
        const KetTrajectory traj = sample_path(path, cycle_time, samples);
        const GeometricPhase g = geometric_phase(traj);
        PhaseRecord r;
        r.geometric = g.wrapped;
        r.geometric_unwrapped = g.unwrapped;
        r.dynamic = dynamic_phase(traj, h);
        r.total = r.geometric + r.dynamic;
        r.cycle_time = cycle_time;
        r.samples = samples;
        return r;
    };
    PhaseRecord coarse = evaluate(n);
    double change = 0.0;
    while (2 * n - 1 <= options.max_samples) {
        n = 2 * n - 1;  // nested grid
        PhaseRecord fine = evaluate(n);
        const double dg = std::abs(fine.geometric_unwrapped - coarse.geometric_unwrapped);
        const double dd = std::abs(fine.dynamic - coarse.dynamic);
        change = std::max(dg, dd);
        if (dg <= options.geometric_tolerance && dd <= options.dynamic_tolerance) return fine;
        coarse = fine;
    }
    throw DivergenceError("phase_cycle: grid doubling did not converge", change);
}

PhaseRecord sp1_phase_cycle(const ModelParams& p, const PhaseOptions& options) {
    if (!(p.omega1 > 0.0)) throw DomainError("sp1_phase_cycle: omega1 must be positive");
    return phase_cycle([p](double t) { return protected_state_sp1(p, t); },
                       [p](double t) { return interaction_drive_hamiltonian(p, t); }, M_PI / p.omega1, options);
}

}  // namespace engres
