// Copyright 2026 The daem-lab Authors
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

#include "daem/states.hpp"

namespace daem {

/// Quench dynamics under a fixed Ising Hamiltonian; the propagator is built once.
class SpinDynamics {
 public:
  SpinDynamics(const IsingSpec& spec, double t) : spec_(spec), t_(t) {
    spec.validate();
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    hamiltonian_ = ising_hamiltonian(spec);
    propagator_ = expm_hermitian(hamiltonian_, t);
  }

  const IsingSpec& spec() const { return spec_; }
  double time() const { return t_; }
  const CMat& hamiltonian() const { return hamiltonian_; }
  const CMat& propagator() const { return propagator_; }

  DensityMatrix operator()(const DensityMatrix& in) const {
    if (in.dim() != propagator_.rows()) throw std::invalid_argument("state dimension does not match spin chain");
    CMat out = propagator_ * in.matrix() * propagator_.adjoint();
    return DensityMatrix(0.5 * (out + out.adjoint()));
  }

 private:
  IsingSpec spec_;
  double t_;
  CMat hamiltonian_;
  CMat propagator_;
};

inline DensityMatrix spin_dynamics(const DensityMatrix& input, const IsingSpec& spec, double t) {
  return SpinDynamics(spec, t)(input);
}

}  // namespace daem
