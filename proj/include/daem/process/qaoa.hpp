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

// QAOA for Max-Cut. The circuit acts on the |+>^n input, which is supplied as
// the process input rather than built from Hadamards.

#include "daem/circuit.hpp"
#include "daem/random.hpp"

#include <istream>
#include <sstream>

namespace daem {

struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const {
    if (n_vertices < 1) throw std::invalid_argument("graph needs at least one vertex");
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop in graph");
    }
  }

  static Graph ring(int n) {
    Graph g{n, {}};
    for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
    g.validate();
    return g;
  }

  /// Edge list, one "u v" pair per line, 0-indexed; '#' starts a comment.
  static Graph parse_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    int max_v = -1;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      int u = 0, v = 0;
      if (!(ls >> u)) continue;
      if (!(ls >> v)) throw std::invalid_argument("malformed edge line: '" + line + "'");
      g.edges.emplace_back(u, v);
      max_v = std::max({max_v, u, v});
    }
    g.n_vertices = max_v + 1;
    g.validate();
    return g;
  }
};

/// Number of edges cut by the partition; bit i of the string (qubit i) gives vertex i's side.
inline double maxcut_value(std::size_t bits, const Graph& g) {
  double cut = 0.0;
  for (auto [u, v] : g.edges) {
    const bool a = bits & qubit_mask(u, g.n_vertices), b = bits & qubit_mask(v, g.n_vertices);
    cut += (a != b) ? 1.0 : 0.0;
  }
  return cut;
}

/// p layers; each is one group: exp(-i gamma H_C) via CNOT-Rz(-gamma)-CNOT per edge, then Rx(2 beta) mixers.
inline Circuit build_qaoa(const Graph& g, int p, std::span<const double> gamma, std::span<const double> beta,
                          double tag = 0.0) {
  g.validate();
  if (p < 1) throw std::invalid_argument("QAOA depth must be >= 1");
  if (gamma.size() != static_cast<std::size_t>(p) || beta.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("QAOA expects p values of gamma and beta");
  Circuit c(g.n_vertices, tag);
  for (int l = 0; l < p; ++l) {
    for (auto [u, v] : g.edges) {
      c.add(Gate::cnot(u, v, l));
      c.add(Gate::rz(v, -gamma[static_cast<std::size_t>(l)], l));
      c.add(Gate::cnot(u, v, l));
    }
    for (int q = 0; q < g.n_vertices; ++q) c.add(Gate::rx(q, 2.0 * beta[static_cast<std::size_t>(l)], l));
  }
  return c;
}

inline CVec plus_state_vector(int n) {
  const auto dim = static_cast<Eigen::Index>(pow2(n));
  return CVec::Constant(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
}

struct QaoaParams {
  std::vector<double> gamma, beta;
  double expected_cut = 0.0;
};

inline double qaoa_expected_cut(const Graph& g, int p, std::span<const double> gamma, std::span<const double> beta) {
  const CVec psi = run_statevector(plus_state_vector(g.n_vertices), build_qaoa(g, p, gamma, beta));
  double e = 0.0;
  for (Eigen::Index x = 0; x < psi.size(); ++x) e += std::norm(psi(x)) * maxcut_value(static_cast<std::size_t>(x), g);
  return e;
}

/// Gradient ascent on the noiseless expected cut with central differences, several seeded starts.
inline QaoaParams train_qaoa(const Graph& g, int p, std::uint64_t seed, int iterations = 500, double step = 0.05,
                             int restarts = 4) {
  QaoaParams best;
  best.expected_cut = -1.0;
  constexpr double h = 1e-5;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    auto rng = make_rng(seed, {0x51a0u, static_cast<std::uint64_t>(r)});
    std::uniform_real_distribution<double> init(0.0, kPi / 2.0);
    std::vector<double> x(static_cast<std::size_t>(2 * p));
    for (auto& v : x) v = init(rng);
    auto value = [&](const std::vector<double>& y) {
      return qaoa_expected_cut(g, p, std::span(y).first(static_cast<std::size_t>(p)),
                               std::span(y).subspan(static_cast<std::size_t>(p)));
    };
    std::vector<double> grad(x.size());
    for (int it = 0; it < iterations; ++it) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double keep = x[j];
        x[j] = keep + h;
        const double up = value(x);
        x[j] = keep - h;
        const double down = value(x);
        x[j] = keep;
        grad[j] = (up - down) / (2.0 * h);
      }
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += step * grad[j];
    }
    const double e = value(x);
    if (e > best.expected_cut) {
      best.gamma.assign(x.begin(), x.begin() + p);
      best.beta.assign(x.begin() + p, x.end());
      best.expected_cut = e;
    }
  }
  return best;
}

}  // namespace daem
