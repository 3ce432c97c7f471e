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

// Three-level readout of the protected-state phase against an uncoupled
// auxiliary level |a>.

#include "engres/lindblad.hpp"
#include "engres/model.hpp"

#include <vector>

namespace engres {

struct ThreeLevelConfig {
    ModelParams params;
    bool include_l_tl = false;  // sigma_ge emission at gamma
    double t_end = 0.0;         // 0: four cycles pi/omega1
    int samples = 401;
};

struct InterferometerResult {
    Trajectory trajectory;  // basis (a, e, g), drive interaction picture
    std::vector<double> rho_aa;
    std::vector<double> rho_up;    // population of R(t)|up>
    std::vector<double> rho_down;  // population of R(t)|down>
    std::vector<Complex> coherence;  // <psi(t)|rho|a>
    std::vector<double> phase;       // -arg coherence, unwrapped
    std::vector<double> reference;   // cos((2 omega1 + omega2) t)/2
    double slope = 0.0;              // least-squares d phase/dt
    double expected_slope = 0.0;     // omega1 + omega2/2
    double reference_frequency = 0.0;
    double max_probability_error = 0.0;
    double coherence_decay_first_cycle = 0.0;  // 1 - |c(T)|/|c(0)|
};

InterferometerResult run_interferometer(const ThreeLevelConfig& cfg);

// cos((2 omega1 + omega2) t)/2
double population_inversion_reference(double omega1, double omega2, double t);

}  // namespace engres
