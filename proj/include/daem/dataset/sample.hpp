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

// One Algorithm-1 record: process tag g, observable encoding, K rows of noisy
// statistics ordered by noise-level index, and the label statistic. Noise-level
// values are never stored, only their ordinal position.

#include "daem/linalg.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace daem {

enum class Phase { NoiseAwareness, ErrorMitigation };

inline std::string to_string(Phase p) { return p == Phase::NoiseAwareness ? "noise-awareness" : "error-mitigation"; }

inline Phase phase_from_string(std::string_view s) {
  if (s == "noise-awareness") return Phase::NoiseAwareness;
  if (s == "error-mitigation") return Phase::ErrorMitigation;
  throw std::invalid_argument("unknown phase '" + std::string(s) + "'");
}

struct DatasetSample {
  std::size_t id = 0;
  double g = 0.0;
  std::vector<double> observable;
  std::vector<std::vector<double>> P;
  std::vector<double> p0;
  // meta
  std::string experiment;
  Phase phase = Phase::NoiseAwareness;
  std::string split;  // train | val | test
  std::string label;  // human-readable observable name
  std::uint64_t seed = 0;

  std::size_t levels() const { return P.size(); }
  std::size_t stat_size() const { return p0.size(); }

  void validate() const {
    if (P.empty()) throw std::invalid_argument("sample has no noise-level rows");
    for (const auto& row : P)
      if (row.size() != p0.size()) throw std::invalid_argument("sample rows differ in width from the label");
  }
};

inline nlohmann::json to_json(const DatasetSample& s) {
  nlohmann::json j;
  j["g"] = s.g;
  j["observable"] = s.observable;
  j["P"] = s.P;
  j["p0"] = s.p0;
  j["meta"] = {{"id", s.id},       {"experiment", s.experiment}, {"phase", to_string(s.phase)},
               {"split", s.split}, {"label", s.label},           {"seed", s.seed}};
  return j;
}

inline DatasetSample sample_from_json(const nlohmann::json& j) {
  DatasetSample s;
  s.g = j.at("g").get<double>();
  s.observable = j.at("observable").get<std::vector<double>>();
  s.P = j.at("P").get<std::vector<std::vector<double>>>();
  s.p0 = j.at("p0").get<std::vector<double>>();
  const auto& m = j.at("meta");
  s.id = m.at("id").get<std::size_t>();
  s.experiment = m.at("experiment").get<std::string>();
  s.phase = phase_from_string(m.at("phase").get<std::string>());
  s.split = m.at("split").get<std::string>();
  s.label = m.value("label", "");
  s.seed = m.at("seed").get<std::uint64_t>();
  s.validate();
  return s;
}

inline void write_jsonl(std::ostream& out, const std::vector<DatasetSample>& samples) {
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

inline std::vector<DatasetSample> read_jsonl(std::istream& in) {
  std::vector<DatasetSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline void save_jsonl(const std::string& path, const std::vector<DatasetSample>& samples) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_jsonl(f, samples);
}

inline std::vector<DatasetSample> load_jsonl(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  return read_jsonl(f);
}

inline std::vector<DatasetSample> select_split(const std::vector<DatasetSample>& all, std::string_view split) {
  std::vector<DatasetSample> out;
  for (const auto& s : all)
    if (s.split == split) out.push_back(s);
  return out;
}

/// Real parts then imaginary parts of a local observable matrix (column-major),
/// followed by a one-hot site vector when n_sites > 0.
inline std::vector<double> encode_observable(const CMat& local, int site = 0, int n_sites = 0) {
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(2 * local.size() + n_sites));
  for (Eigen::Index i = 0; i < local.size(); ++i) e.push_back(local.data()[i].real());
  for (Eigen::Index i = 0; i < local.size(); ++i) e.push_back(local.data()[i].imag());
  for (int k = 0; k < n_sites; ++k) e.push_back(k == site ? 1.0 : 0.0);
  return e;
}

}  // namespace daem
