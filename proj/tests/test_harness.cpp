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

#include "daem/harness/runner.hpp"
#include "daem/harness/selftest.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace daem;
using namespace daem::harness;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("daem_test_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig parse(const std::string& text) { return parse_config(parse_jsonc(text, "test")); }

// small swap-test config shared by the pipeline tests
const char* kSmallSwap = R"({
  "experiment": "swap-test", "seed": 7,
  "noise": {"levels": [0.05, 0.1, 0.15]},
  "process": {"register_size": 1},
  "dataset": {"train": 30, "val": 10, "test": 6},
  "model": {"embed": 8, "hidden": [32, 32]},
  "train": {"epochs": 15, "batch": 16},
  "baselines": {"cdr_variants": 8}
})";

struct SeedEnv {
  explicit SeedEnv(const char* v) { v ? setenv("DAEM_SEED", v, 1) : unsetenv("DAEM_SEED"); }
  ~SeedEnv() { unsetenv("DAEM_SEED"); }
};

}  // namespace

TEST(Metrics, Examples) {
  EXPECT_DOUBLE_EQ(metric_mae({0.0, 1.0}, {1.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(metric_mae({0.3, -0.2, 0.9}, {0.3, -0.2, 0.9}), 0.0);
  const std::vector<double> p{0.1, -0.5, 0.7, 0.2}, t{0.3, 0.4, -0.1, 0.2};
  const std::vector<double> pp{0.7, 0.2, 0.1, -0.5}, tp{-0.1, 0.2, 0.3, 0.4};
  EXPECT_DOUBLE_EQ(metric_mae(p, t), metric_mae(pp, tp));
  EXPECT_NEAR(metric_mae(p, t), (0.2 + 0.9 + 0.8 + 0.0) / 4.0, 1e-15);
  EXPECT_THROW(metric_mae({1.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(metric_mae({}, {}), std::invalid_argument);

  const std::vector<double> d{0.25, 0.5, 0.25};
  EXPECT_NEAR(metric_kl(d, d), 0.0, 1e-12);
  EXPECT_GT(metric_kl({0.5, 0.5, 0.0}, d), 0.0);

  const auto clipped = clip_renormalize({-0.2, 0.3, 0.1});
  ASSERT_EQ(clipped.size(), 3u);
  EXPECT_EQ(clipped[0], 0.0);
  EXPECT_NEAR(clipped[1], 0.75, 1e-15);
  EXPECT_NEAR(clipped[2], 0.25, 1e-15);
  EXPECT_EQ(clip_renormalize({-1.0, -1.0}), (std::vector<double>{0.5, 0.5}));
}

TEST(Config, DefaultsAndComments) {
  SeedEnv env(nullptr);
  const ExperimentConfig c = parse(R"({
    // comment
    "experiment": "vqe", /* inline */ "seed": 9
  })");
  EXPECT_EQ(c.experiment, ExperimentKind::Vqe);
  EXPECT_EQ(c.seed, 9u);
  ASSERT_EQ(c.noise.levels.size(), 13u);
  EXPECT_NEAR(c.noise.levels.front(), 0.05, 1e-12);
  EXPECT_NEAR(c.noise.levels.back(), 0.29, 1e-12);
  EXPECT_EQ(c.dataset.train, 100);
  EXPECT_EQ(c.dataset.val, 50);
  EXPECT_EQ(c.train.epochs, 300);
  EXPECT_EQ(c.n_qubits(), 4);

  const ExperimentConfig s = parse(R"({"experiment": "swap-test"})");
  EXPECT_EQ(s.dataset.test, 20);
  EXPECT_EQ(s.n_qubits(), 7);
  EXPECT_EQ(s.noise.placement, Placement::BeforeEachBlock);

  // hash ignores output and threads, tracks everything else
  EXPECT_EQ(parse(R"({"experiment": "vqe", "output": "a", "threads": 3})").hash(), parse(R"({"experiment": "vqe"})").hash());
  EXPECT_NE(parse(R"({"experiment": "vqe", "seed": 1})").hash(), parse(R"({"experiment": "vqe"})").hash());
}

TEST(Config, Errors) {
  SeedEnv env(nullptr);
  auto err = [](const std::string& text) -> std::string {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(err(R"({"experiment": "vqe", "bogus": 1})").find("bogus"), std::string::npos);
  EXPECT_NE(err(R"({"experiment": "vqe", "train": {"epoch": 3}})").find("train.epoch"), std::string::npos);
  EXPECT_NE(err(R"({"experiment": "teleport"})"), "");
  EXPECT_NE(err(R"({"seed": 1})"), "");
  EXPECT_NE(err(R"({"experiment": "vqe", "noise": {"levels": [0.2, 0.1]}})"), "");
  EXPECT_NE(err(R"({"experiment": "vqe", "noise": {"levels": [1.5]}})"), "");
  EXPECT_NE(err(R"({"experiment": "vqe", "noise": {"kind": "bit-flip"}})"), "");
  EXPECT_NE(err(R"({"experiment": "vqe", "dataset": {"train": "many"}})"), "");
  EXPECT_NE(err(R"({"experiment": "vqe", "process": {"qubits": 13}})").find("13 qubits"), std::string::npos);
  const std::string mem = err(R"({"experiment": "spin-dynamics", "process": {"qubits": 12}, "memory_budget_mb": 64})");
  EXPECT_NE(mem.find("estimated"), std::string::npos) << mem;
  EXPECT_NE(err(R"({"experiment": "cv-kerr", "noise": {"kind": "phase-damping"}})"), "");
  EXPECT_THROW(parse_jsonc("{\"experiment\": ", "broken"), ConfigError);
}

TEST(Config, SeedPrecedence) {
  const Json doc = parse_jsonc(R"({"experiment": "qaoa", "seed": 5})", "test");
  {
    SeedEnv env(nullptr);
    EXPECT_EQ(parse_config(doc).seed, 5u);
    EXPECT_EQ(parse_config(doc, 11).seed, 11u);
  }
  {
    SeedEnv env("42");
    EXPECT_EQ(parse_config(doc).seed, 42u);
    EXPECT_EQ(parse_config(doc, 11).seed, 11u);
  }
  {
    SeedEnv env("4x");
    EXPECT_THROW(parse_config(doc), ConfigError);
  }
}

TEST(Pipeline, VqeDatasetHasThirteenLevelRows) {
  SeedEnv env(nullptr);
  const ExperimentConfig c = parse(R"({
    "experiment": "vqe",
    "process": {"fields": [0.8], "optimizer_iterations": 20, "optimizer_restarts": 1},
    "dataset": {"train": 2, "val": 1}
  })");
  const fs::path dir = scratch("vqe13");
  const Datasets d = run_dataset(c, dir);
  EXPECT_EQ(d.na.size(), 3u * 27u);
  EXPECT_EQ(d.em.size(), 27u);
  for (const auto& set : {d.na, d.em})
    for (const auto& s : set) {
      ASSERT_EQ(s.P.size(), 13u);
      for (const auto& row : s.P) EXPECT_EQ(row.size(), 1u);
    }
  // the serialized dump carries the same rows
  std::ifstream f(dir / "dataset.jsonl");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(Json::parse(line).at("P").size(), 13u);
  fs::remove_all(dir);
}

TEST(Pipeline, StagedVerbsMatchFullRunAndAreDeterministic) {
  SeedEnv env(nullptr);
  ExperimentConfig c = parse(kSmallSwap);
  const fs::path a = scratch("full_a"), b = scratch("full_b"), staged = scratch("staged");
  const Json ra = run_experiment(c, a);
  c.threads = 3;
  run_experiment(c, b);
  c.threads = 1;
  run_dataset(c, staged);
  run_train(c, staged);
  run_evaluate(c, staged);

  for (const char* f : {"report.json", "training.json", "metrics.csv", "predictions.csv", "dataset.jsonl", "model.ckpt", "plot_mae_by_g.csv"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
    EXPECT_EQ(read_file(a / f), read_file(staged / f)) << f;
  }
  EXPECT_EQ(ra.at("config_hash").get<std::string>(), c.hash());
  for (const char* method : {"noisy", "daem", "zne", "cdr"}) EXPECT_GE(ra.at("metrics").at(method).at("mae").get<double>(), 0.0);

  // every prediction row is traceable to an error-mitigation sample id
  const Datasets d = read_dataset(a, c);
  std::set<std::string> ids;
  for (const auto& s : d.em) ids.insert(std::to_string(s.id));
  std::istringstream pred(read_file(a / "predictions.csv"));
  std::string line;
  std::getline(pred, line);
  std::size_t rows = 0;
  while (std::getline(pred, line)) {
    EXPECT_TRUE(ids.count(line.substr(0, line.find(',')))) << line;
    ++rows;
  }
  EXPECT_EQ(rows, d.em.size());

  // manifest hashes match the files
  const Json m = Json::parse(read_file(a / "manifest.json"));
  EXPECT_GE(m.at("files").size(), 10u);
  for (const auto& f : m.at("files"))
    EXPECT_EQ(f.at("sha256").get<std::string>(), sha256_hex(read_file(a / f.at("name").get<std::string>())));
  for (const auto& p : {a, b, staged}) fs::remove_all(p);
}

TEST(Pipeline, HashMismatchIsHardError) {
  SeedEnv env(nullptr);
  const ExperimentConfig c = parse(kSmallSwap);
  const fs::path dir = scratch("mismatch");
  run_dataset(c, dir);
  ExperimentConfig other = c;
  other.seed = 8;
  EXPECT_THROW(run_train(other, dir), ConfigError);
  run_train(c, dir);
  ExperimentConfig retrained = c;
  retrained.train.epochs = 16;
  EXPECT_THROW(run_evaluate(retrained, dir), ConfigError);
  fs::remove_all(dir);
}

TEST(Pipeline, ZeroNoiseGridReproducesLabels) {
  SeedEnv env(nullptr);
  // with a single zero level the noisy row equals the label, so the model only has to learn the identity
  const ExperimentConfig c = parse(R"({
    "experiment": "swap-test", "seed": 3,
    "noise": {"levels": [0.0]},
    "process": {"register_size": 1},
    "dataset": {"train": 600, "val": 100, "test": 20},
    "model": {"embed": 16, "hidden": [64, 64]},
    "train": {"epochs": 300, "batch": 32, "lr": 3e-3},
    "baselines": {"cdr": false}
  })");
  const fs::path dir = scratch("zero");
  const Json r = run_experiment(c, dir);
  EXPECT_LT(r.at("metrics").at("noisy").at("mae").get<double>(), 1e-12);
  EXPECT_LT(r.at("metrics").at("daem").at("mae").get<double>(), 1e-2);
  EXPECT_FALSE(r.at("metrics").contains("zne"));
  fs::remove_all(dir);
}

TEST(Selftest, AllSuitesPass) {
  for (const auto& r : run_selftest()) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}
