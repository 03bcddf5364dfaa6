// Copyright 2026 The qmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: each campaign stage as a subcommand, plus `run` for
// the whole pipeline and `compare` for raw-circuit oracle checks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qmut/campaign.h"
#include "qmut/error.h"
#include "qmut/oracle.h"
#include "qmut/qasm.h"
#include "qmut/report.h"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required = true) {
  auto* c = cmd->add_option("--config", o.config, "campaign config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "output directory (overrides config.output)");
  cmd->add_option("--workers", o.workers, "parallel evaluation workers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--shots", o.shots, "shots per prediction (overrides config.shots)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "campaign seed (overrides config.seed)");
}

qmut::CampaignConfig load_config(const Overrides& o) {
  qmut::CampaignConfig c = qmut::CampaignConfig::load(o.config);
  if (!o.out.empty()) c.output = o.out;
  if (o.shots) c.shots = *o.shots;
  if (o.seed) {
    c.seed = *o.seed;
    c.mutation.seed = *o.seed;
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qmut::Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_training(const qmut::CampaignResult& r) {
  fmt::print("model {} + {} on {} qubits, {} weights (fingerprint {})\n",
             qmut::to_string(r.model.feature_map), qmut::to_string(r.model.ansatz),
             r.model.num_qubits(), r.model.weight_symbols.size(), r.model.fingerprint());
  fmt::print("train accuracy {:.3f}, test accuracy {:.3f}, loss {:.4f}\n", r.train_accuracy,
             r.test_accuracy, r.training_loss);
}

void print_mutants(const qmut::CampaignResult& r) {
  fmt::print("test suite: {} of {} test samples\n", r.suite->samples.size(),
             r.data.test.size());
  for (qmut::OperatorKind op : r.config.operators) {
    fmt::print("{:<11} generated {:>6}  discarded {:>6}\n", qmut::operator_name(op),
               r.mutations.generated.at(op), r.mutations.discarded_count.at(op));
  }
  for (const auto& n : r.mutations.notes) fmt::print("note: {}\n", n);
}

int report_command(const Overrides& o) {
  std::filesystem::path dir = o.out;
  if (dir.empty()) {
    if (o.config.empty()) throw qmut::ConfigError("report needs --out or --config");
    dir = load_config(o).output;
  }
  const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
  nlohmann::json timings;
  if (std::filesystem::exists(dir / "timings.json")) {
    timings = nlohmann::json::parse(read_file(dir / "timings.json"));
  }
  const std::string text = qmut::render_text(report, timings);
  std::ofstream(dir / "report.txt", std::ios::binary) << text;
  std::ofstream(dir / "report.csv", std::ios::binary) << qmut::render_csv(report, timings);
  fmt::print("{}", text);
  return 0;
}

int compare_command(const std::string& a, const std::string& b, std::uint64_t shots,
                    std::uint64_t seed, double tolerance, const std::string& metric) {
  const qmut::Circuit original = qmut::parse_qasm(read_file(a));
  const qmut::Circuit mutant = qmut::parse_qasm(read_file(b));
  qmut::OpoMetric m = qmut::OpoMetric::kPerOutcome;
  if (metric == "tv") {
    m = qmut::OpoMetric::kTotalVariation;
  } else if (metric != "per-outcome") {
    throw qmut::ConfigError("--metric must be per-outcome or tv");
  }
  const auto v = qmut::compare_circuits(original, mutant, shots, seed, tolerance, m);
  fmt::print("WOO {}\nOPO {}\nverdict {}\n", v.woo_killed ? "killed" : "passed",
             v.woo_killed ? "skipped" : (v.opo_killed ? "killed" : "passed"),
             v.killed() ? "killed" : "survived");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation testing for quantum neural-network circuits"};
  app.require_subcommand(1);

  Overrides train_o, mutate_o, eval_o, run_o, export_o, report_o;
  auto* train = app.add_subcommand("train", "prepare data and train (or load) the model");
  add_common(train, train_o);
  auto* mutate = app.add_subcommand("mutate", "generate and filter mutants, export QASM");
  add_common(mutate, mutate_o);
  auto* evaluate = app.add_subcommand("evaluate", "evaluate mutants against the test suite");
  add_common(evaluate, eval_o);
  auto* run = app.add_subcommand("run", "whole campaign: train, mutate, evaluate, report");
  add_common(run, run_o);
  auto* exporter = app.add_subcommand("export-qasm", "write the mutant QASM tree only");
  add_common(exporter, export_o);
  auto* report = app.add_subcommand("report", "render report.json from an output directory");
  add_common(report, report_o, false);

  std::string cmp_a, cmp_b, cmp_metric = "per-outcome";
  std::uint64_t cmp_shots = 10000, cmp_seed = 0;
  double cmp_tol = 0.05;
  auto* compare = app.add_subcommand("compare", "WOO/OPO verdict for two QASM circuits");
  compare->add_option("original", cmp_a, "original circuit (.qasm)")->required();
  compare->add_option("mutant", cmp_b, "mutant circuit (.qasm)")->required();
  compare->add_option("--shots", cmp_shots, "mutant shots")->check(CLI::PositiveNumber);
  compare->add_option("--seed", cmp_seed, "sampling seed");
  compare->add_option("--tolerance", cmp_tol, "OPO tolerance");
  compare->add_option("--metric", cmp_metric, "OPO metric: per-outcome or tv");

  CLI11_PARSE(app, argc, argv);

  try {
    auto stage_run = [](const Overrides& o, qmut::Stage until) {
      qmut::RunOptions opts;
      opts.workers = o.workers;
      opts.until = until;
      return qmut::run_campaign(load_config(o), opts);
    };
    if (*train) {
      print_training(stage_run(train_o, qmut::Stage::kTrain));
    } else if (*mutate || *exporter) {
      const auto r = stage_run(*mutate ? mutate_o : export_o, qmut::Stage::kMutate);
      if (*mutate) print_mutants(r);
      fmt::print("wrote {}\n", (std::filesystem::path(r.config.output) / "qasm").string());
    } else if (*evaluate || *run) {
      const auto r = stage_run(*run ? run_o : eval_o, qmut::Stage::kEvaluate);
      if (*run) print_training(r);
      fmt::print("{}", qmut::render_text(qmut::report_json(r), qmut::timings_json(r.timings)));
    } else if (*report) {
      return report_command(report_o);
    } else if (*compare) {
      return compare_command(cmp_a, cmp_b, cmp_shots, cmp_seed, cmp_tol, cmp_metric);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
