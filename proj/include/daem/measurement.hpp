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

#include "daem/density_matrix.hpp"
#include "daem/random.hpp"

#include <vector>

namespace daem {

/// Bitstring frequencies in the computational basis. shots = 0 returns the exact
/// populations; otherwise a multinomial sample of `shots` outcomes, normalized.
inline std::vector<double> sample_distribution(const DensityMatrix& state, int shots, Rng& rng) {
  if (shots < 0) throw std::invalid_argument("shots must be >= 0");
  const RVec pop = state.populations();
  std::vector<double> probs(static_cast<std::size_t>(pop.size()));
  for (Eigen::Index i = 0; i < pop.size(); ++i) probs[static_cast<std::size_t>(i)] = std::max(0.0, pop(i));
  if (shots == 0) {
    double total = 0.0;
    for (double p : probs) total += p;
    for (double& p : probs) p /= total;
    return probs;
  }
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  std::vector<double> freq(probs.size(), 0.0);
  for (int s = 0; s < shots; ++s) freq[dist(rng)] += 1.0;
  for (double& f : freq) f /= shots;
  return freq;
}

/// Finite-shot estimate of an observable with eigenvalues +-1 given its exact mean.
inline double sample_pm1_mean(double exact, int shots, Rng& rng) {
  if (shots == 0) return exact;
  const double p_plus = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  std::binomial_distribution<int> dist(shots, p_plus);
  const int plus = dist(rng);
  return (2.0 * plus - shots) / shots;
}

}  // namespace daem
