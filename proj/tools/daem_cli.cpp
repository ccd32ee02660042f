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

#include <CLI11.hpp>

#include <iostream>

using namespace daem;
using namespace daem::harness;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> shots;
  bool exact_shots = false;
  std::optional<int> threads;
  bool quiet = false;
};

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig c = load_config(o.config, o.seed);
  if (o.exact_shots && o.shots) throw ConfigError("--exact-shots and --shots are mutually exclusive");
  if (o.exact_shots) c.shots = 0;
  if (o.shots) {
    if (*o.shots < 0) throw ConfigError("--shots must be >= 0");
    c.shots = *o.shots;
  }
  if (o.threads) {
    if (*o.threads < 1) throw ConfigError("--threads must be >= 1");
    c.threads = *o.threads;
  }
  if (!o.out.empty()) c.output = o.out;
  return c;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON with comments)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "overrides DAEM_SEED and the config seed");
  cmd->add_option("--out", o.out, "output directory (default: config 'output')");
  cmd->add_option("--shots", o.shots, "measurement shots per statistic; 0 means exact");
  cmd->add_flag("--exact-shots", o.exact_shots, "exact statistics (same as --shots 0)");
  cmd->add_option("--threads", o.threads, "dataset worker threads; 1 is fully deterministic");
  cmd->add_flag("-q,--quiet", o.quiet, "no progress log");
}

void print_summary(const Json& report) {
  std::cout << "\n" << report.at("experiment").get<std::string>() << " (config " << report.at("config_hash").get<std::string>().substr(0, 12)
            << ")\n";
  for (const auto& [method, vals] : report.at("metrics").items()) {
    std::cout << "  " << method;
    for (const auto& [k, v] : vals.items()) std::cout << "  " << k << "=" << num(v.get<double>());
    std::cout << "\n";
  }
  for (const auto& [k, v] : report.at("checks").items()) std::cout << "  check " << k << ": " << (v.get<bool>() ? "yes" : "no") << "\n";
  for (const auto& [k, v] : report.at("comparisons").items()) std::cout << "  " << k << ": " << (v.get<bool>() ? "yes" : "no") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-augmentation-empowered neural error mitigation: experiment runner"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "generate datasets, train, evaluate, write reports");
  auto* dataset = app.add_subcommand("dataset", "generate both dataset phases only");
  auto* train = app.add_subcommand("train", "train the mitigator from a generated dataset");
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a trained checkpoint and write reports");
  auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
  for (auto* cmd : {run, dataset, train, evaluate}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (selftest->parsed()) {
      bool ok = true;
      for (const auto& r : run_selftest()) {
        char t[16];
        std::snprintf(t, sizeof t, "%.2fs", r.seconds);
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "  (" << t << ")\n";
        ok = ok && r.passed;
      }
      return ok ? 0 : 3;
    }
    const ExperimentConfig c = resolve(o);
    const Log log(o.quiet ? nullptr : &std::cerr);
    const fs::path dir = c.output;
    log(to_string(c.experiment) + ": config hash " + c.hash() + ", seed " + std::to_string(c.seed) + ", output " + dir.string());
    if (run->parsed()) {
      print_summary(run_experiment(c, dir, log));
    } else if (dataset->parsed()) {
      const Datasets d = run_dataset(c, dir, log);
      std::cout << "wrote " << d.na.size() << " noise-awareness and " << d.em.size() << " error-mitigation samples to "
                << (dir / "dataset.jsonl").string() << "\n";
    } else if (train->parsed()) {
      const TrainOutcome t = run_train(c, dir, log);
      std::cout << "best validation loss " << num(t.result.best_val) << " at epoch " << t.result.best_epoch << "; checkpoint "
                << (dir / "model.ckpt").string() << "\n";
    } else if (evaluate->parsed()) {
      print_summary(run_evaluate(c, dir, log));
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
