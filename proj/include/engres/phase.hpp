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

// Geometric (Pancharatnam) and dynamic phases along sampled pure-state
// trajectories, and Bloch-sphere path export.

#include "engres/frames.hpp"
#include "engres/model.hpp"
#include "engres/quantum_core.hpp"

#include <functional>
#include <vector>

namespace engres {

struct KetTrajectory {
    std::vector<double> times;
    std::vector<Ket> states;
};

using KetPath = std::function<Ket(double)>;

// samples >= 2 points on [0, t_end], endpoints included.
KetTrajectory sample_path(const KetPath& path, double t_end, int samples);

// -int <psi|H|psi> dt by the trapezoid rule on the trajectory grid.
double dynamic_phase(const KetTrajectory& traj, const HamiltonianSampler& h);

struct GeometricPhase {
    double wrapped = 0.0;    // in (-2 pi, 0]
    double unwrapped = 0.0;  // accumulated step phases, winding kept
};

// -(sum_k arg<psi_k|psi_k+1> + arg<psi_N|psi_0>). Throws DomainError when an
// overlap magnitude falls below 1e-6.
GeometricPhase geometric_phase(const KetTrajectory& traj);

struct BlochSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

std::vector<BlochSample> export_bloch_path(const KetTrajectory& traj, const Ket& b0, const Ket& b1);

struct PhaseRecord {
    double geometric = 0.0;
    double geometric_unwrapped = 0.0;
    double dynamic = 0.0;
    double total = 0.0;  // geometric + dynamic
    double cycle_time = 0.0;
    int samples = 0;     // grid size at convergence
};

struct PhaseOptions {
    int initial_samples = 257;
    int max_samples = 1 << 20;
    double geometric_tolerance = 1e-5;
    double dynamic_tolerance = 1e-6;
};

// Samples path on [0, cycle_time], doubling the grid until both phases are
// stable. Throws DivergenceError otherwise.
PhaseRecord phase_cycle(const KetPath& path, const HamiltonianSampler& h, double cycle_time,
                        const PhaseOptions& options = {});

// One cycle T = pi/omega1 of the nonadiabatic protected state under H_I.
PhaseRecord sp1_phase_cycle(const ModelParams& p, const PhaseOptions& options = {});

}  // namespace engres
