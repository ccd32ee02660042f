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

// drho/dt = -i[s H_kerr, rho] + loss (a rho a^dagger - {a^dagger a, rho}/2), s in {+1, -1, 0}.
// H_kerr is diagonal, so RK4 runs in its interaction picture: the Kerr phases
// are exact and only the loss term, carrying phases e^{-2 pi i s (m-n) t}, is stepped.

#include "daem/cv/fock.hpp"

#include <cmath>

namespace daem::cv {

struct LindbladOptions {
  double dt = 1e-3;
  double drift_tolerance = 1e-4;
};

namespace detail {

/// Interaction-picture generator at time t: loss (sqrt((m+1)(n+1)) e^{-2 pi i s (m-n) t} r(m+1, n+1) - (m+n)/2 r(m, n)).
inline CMat lindblad_rhs_interaction(const CMat& r, int kerr_sign, double loss, double t) {
  const Eigen::Index n = r.rows();
  CMat out(n, n);
  const cplx w = std::exp(-kI * 2.0 * kPi * static_cast<double>(kerr_sign) * t);
  // w^(m-n) for m-n in (-n, n)
  CVec pw(2 * n - 1);
  pw(n - 1) = 1.0;
  for (Eigen::Index d = 1; d < n; ++d) {
    pw(n - 1 + d) = pw(n - 2 + d) * w;
    pw(n - 1 - d) = std::conj(pw(n - 1 + d));
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx v = -0.5 * static_cast<double>(i + j) * r(i, j);
      if (i + 1 < n && j + 1 < n)
        v += std::sqrt(static_cast<double>((i + 1) * (j + 1))) * pw(n - 1 + i - j) * r(i + 1, j + 1);
      out(i, j) = loss * v;
    }
  return out;
}

}  // namespace detail

/// Exact closed-system Kerr evolution under s H_kerr: rho_mn e^{-i s (h_m - h_n) t}.
inline CMat kerr_phase(const CMat& rho, int kerr_sign, double t) {
  const RVec h = static_cast<double>(kerr_sign) * kerr_diagonal(static_cast<int>(rho.rows()));
  CMat out = rho;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) *= std::exp(-kI * (h(i) - h(j)) * t);
  return out;
}

inline DensityMatrix kerr_exact(const DensityMatrix& state, double t) { return DensityMatrix(kerr_phase(state.matrix(), +1, t)); }

/// Evolve for time t with kerr_sign * H_kerr and photon loss; the step is t / ceil(t / dt).
inline DensityMatrix lindblad_evolve(const DensityMatrix& state, int kerr_sign, double loss, double t,
                                     const LindbladOptions& opt = {}) {
  if (kerr_sign < -1 || kerr_sign > 1) throw std::invalid_argument("kerr_sign must be -1, 0 or +1");
  if (!(loss >= 0.0) || !std::isfinite(loss)) throw std::invalid_argument("loss rate must be finite and >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolution time must be finite and >= 0");
  if (!(opt.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (t == 0.0) return state;
  CMat r = state.matrix();
  if (loss > 0.0) {
    const auto steps = static_cast<long>(std::ceil(t / opt.dt - 1e-9));
    const double dt = t / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const double t0 = dt * static_cast<double>(s);
      const CMat k1 = detail::lindblad_rhs_interaction(r, kerr_sign, loss, t0);
      const CMat k2 = detail::lindblad_rhs_interaction(r + 0.5 * dt * k1, kerr_sign, loss, t0 + 0.5 * dt);
      const CMat k3 = detail::lindblad_rhs_interaction(r + 0.5 * dt * k2, kerr_sign, loss, t0 + 0.5 * dt);
      const CMat k4 = detail::lindblad_rhs_interaction(r + dt * k3, kerr_sign, loss, t0 + dt);
      r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double drift = std::abs(r.trace() - cplx{1.0, 0.0});
      if (drift > opt.drift_tolerance || !std::isfinite(drift))
        throw std::runtime_error("lindblad_evolve: trace drift " + std::to_string(drift) + " at step " +
                                 std::to_string(s + 1) + " of " + std::to_string(steps) +
                                 " (dt=" + std::to_string(dt) + ")");
    }
  }
  const CMat rho = kerr_phase(r, kerr_sign, t);
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

/// Forward +H_kerr for t0/2 then -H_kerr for t0/2, loss active throughout; the identity when loss = 0.
inline DensityMatrix cv_fiducial_evolve(const DensityMatrix& state, double t0, double loss,
                                        const LindbladOptions& opt = {}) {
  if (!(t0 >= 0.0)) throw std::invalid_argument("fiducial time must be >= 0");
  return lindblad_evolve(lindblad_evolve(state, +1, loss, t0 / 2.0, opt), -1, loss, t0 / 2.0, opt);
}

}  // namespace daem::cv
