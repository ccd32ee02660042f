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

#include "daem/cv/wigner.hpp"
#include "daem/nn/loss.hpp"

#include <numeric>

namespace daem::harness {

/// Mean absolute difference.
inline double metric_mae(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("MAE inputs differ in length");
  if (pred.empty()) throw std::invalid_argument("MAE of empty inputs");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

/// KL(dist || ref) with the training loss smoothing.
inline double metric_kl(const std::vector<double>& dist, const std::vector<double>& ref) {
  return nn::loss_kl(dist, ref);
}

/// Negative entries clipped to zero, then renormalized (uniform if nothing is left).
inline std::vector<double> clip_renormalize(std::vector<double> p) {
  double tot = 0.0;
  for (auto& v : p) tot += (v = std::max(v, 0.0));
  if (tot <= 0.0) return std::vector<double>(p.size(), 1.0 / static_cast<double>(p.size()));
  for (auto& v : p) v /= tot;
  return p;
}

inline double grid_fidelity(const cv::GridSpec& grid, const std::vector<double>& a, const std::vector<double>& b) {
  return cv::overlap_fidelity(cv::WignerGrid{grid, a}, cv::WignerGrid{grid, b});
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty list");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace daem::harness
