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

// Noise model for a circuit at a scalar level: a Markovian channel with a
// placement policy (level = lambda), or the spin-boson bath (level = gate time).

#include "daem/bath/spin_boson.hpp"
#include "daem/noise/noisy_circuit.hpp"

#include <memory>

namespace daem {

struct BathNoiseSpec {
  BathSpec bath;
  int modes = 4;
  double omega_max = 20.0;
  int n_max = 3;
};

class NoiseModel {
 public:
  static NoiseModel markovian(ChannelKind kind, Placement placement) {
    if (kind == ChannelKind::Custom) throw std::invalid_argument("custom channels cannot be scaled by a level");
    NoiseModel m;
    m.kind_ = kind;
    m.placement_ = placement;
    return m;
  }

  static NoiseModel spin_boson(const BathNoiseSpec& spec) {
    NoiseModel m;
    m.bath_ = spec;
    m.cache_ = std::make_shared<BathChannelCache>(discretize_bath(spec.bath, spec.modes, spec.omega_max, spec.n_max));
    return m;
  }

  bool is_bath() const { return cache_ != nullptr; }
  ChannelKind kind() const { return kind_; }
  Placement placement() const { return placement_; }

  DensityMatrix run(const DensityMatrix& input, const Circuit& circuit, double level) const {
    if (cache_) {
      if (!(level > 0.0)) throw std::invalid_argument("bath gate time must be positive");
      return run_nonmarkovian_circuit(input, circuit, *cache_, level);
    }
    return run_noisy_circuit(input, circuit, {kind_, level, placement_});
  }

  std::string describe() const {
    if (cache_)
      return "spin-boson(alpha=" + std::to_string(bath_.bath.alpha) + ", modes=" + std::to_string(bath_.modes) + ")";
    return to_string(kind_) + "/" + to_string(placement_);
  }

 private:
  NoiseModel() = default;

  ChannelKind kind_ = ChannelKind::PhaseDamping;
  Placement placement_ = Placement::AfterEachGate;
  BathNoiseSpec bath_;
  std::shared_ptr<BathChannelCache> cache_;
};

}  // namespace daem
