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

#include "daem/nn/params.hpp"

namespace daem::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
struct AdamState {
  Vec<T> m, v;
  std::int64_t step = 0;

  void reset(Eigen::Index n) {
    m = Vec<T>::Zero(n);
    v = Vec<T>::Zero(n);
    step = 0;
  }
};

/// One bias-corrected Adam update in place.
template <class T>
void adam_step(Vec<T>& params, const Vec<T>& grad, AdamState<T>& st, const AdamConfig& cfg) {
  if (grad.size() != params.size()) throw std::invalid_argument("gradient size does not match parameters");
  if (st.m.size() != params.size()) st.reset(params.size());
  ++st.step;
  const T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
  st.m = b1 * st.m + (T(1) - b1) * grad;
  st.v = b2 * st.v + (T(1) - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
  const T step_size = static_cast<T>(cfg.lr / c1);
  const T root_c2 = static_cast<T>(std::sqrt(c2));
  const T eps = static_cast<T>(cfg.eps);
  params.array() -= step_size * st.m.array() / (st.v.array().sqrt() / root_c2 + eps);
}

}  // namespace daem::nn
