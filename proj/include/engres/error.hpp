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

#include <stdexcept>
#include <string>

namespace engres {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An input violates a documented precondition (dimension mismatch,
// non-Hermitian generator, density matrix off the physical manifold, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A refinement loop (integrator, propagator, time average) did not converge.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double achieved_residual)
        : Error(what + " (achieved residual " + std::to_string(achieved_residual) + ")"),
          residual_(achieved_residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// The null space of a Liouvillian holds no trace-class state.
class StructuralError : public Error {
public:
    using Error::Error;
};

}  // namespace engres
