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

#include "qmut/oracle.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "qmut/error.h"

namespace qmut {

TestSuite build_test_suite(const QnnModel& model, const Bindings& weights,
                           const Dataset& test_set, std::uint64_t shots,
                           std::uint64_t seed) {
  if (test_set.size() == 0) throw DataError("empty test set");
  TestSuite suite;
  suite.fingerprint = model.fingerprint();
  for (std::size_t r = 0; r < test_set.size(); ++r) {
    const auto row = test_set.samples.row(r);
    const int label = predict(model, row, weights, shots, evaluation_seed(seed, r));
    if (label == test_set.labels[r]) {
      suite.samples.push_back({r, std::vector<double>(row.begin(), row.end()), label});
    } else {
      suite.rejected.push_back(r);
      suite.rejected_predictions.push_back(label);
    }
  }
  if (suite.samples.empty()) {
    throw Error(fmt::format("empty test suite: the model misclassifies all {} test samples",
                            test_set.size()));
  }
  return suite;
}

std::string verdict_name(const Verdict& verdict) {
  if (std::holds_alternative<Killed>(verdict)) return "killed";
  if (std::holds_alternative<Survived>(verdict)) return "survived";
  return "incompetent";
}

MutantResult evaluate_mutant(const Mutant& mutant, const QnnModel& model,
                             const Bindings& weights, const TestSuite& suite,
                             std::uint64_t shots, std::uint64_t campaign_seed) {
  if (mutant.source_fingerprint != suite.fingerprint ||
      model.fingerprint() != suite.fingerprint) {
    throw Error(fmt::format("mutant {} was not generated from the suite's model", mutant.id));
  }
  MutantResult res;
  res.id = mutant.id;
  res.op = mutant.op();
  res.input_mutation = mutant.is_input_mutation();
  if (mutant.incompetent()) {
    res.verdict = Incompetent{mutant.incompetent_reason};
    return res;
  }
  std::optional<std::size_t> first_kill;
  try {
    for (const auto& s : suite.samples) {
      const std::uint64_t seed = evaluation_seed(campaign_seed, s.id);
      int label;
      if (const auto* t = std::get_if<InputTransform>(&mutant.payload)) {
        label = predict(model, t->apply(s.features), weights, shots, seed);
      } else {
        Bindings b = model.bindings(s.features, weights);
        for (const auto& [k, v] : mutant.extra_bindings) b.insert_or_assign(k, v);
        label = predict_circuit(*mutant.circuit(), model.decoder(), b, shots, seed);
      }
      res.predictions.push_back(label);
      if (label != s.label && !first_kill) first_kill = s.id;
    }
  } catch (const NoMeasurementError&) {
    res.predictions.clear();
    res.verdict = Incompetent{"no measurement"};
    return res;
  } catch (const BindError& e) {
    res.predictions.clear();
    res.verdict = Incompetent{e.what()};
    return res;
  }
  if (first_kill) {
    res.verdict = Killed{*first_kill};
  } else {
    res.verdict = Survived{};
  }
  return res;
}

std::vector<MutantResult> evaluate_all(std::span<const Mutant> mutants,
                                       const QnnModel& model,
                                       const Bindings& weights,
                                       const TestSuite& suite,
                                       std::uint64_t shots,
                                       std::uint64_t campaign_seed,
                                       unsigned workers) {
  std::vector<MutantResult> results(mutants.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < mutants.size(); i = next++) {
      try {
        results[i] = evaluate_mutant(mutants[i], model, weights, suite, shots, campaign_seed);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = mutants.size();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(mutants.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::optional<double> mutation_score(std::size_t killed, std::size_t competent) {
  if (competent == 0) return std::nullopt;
  return 100.0 * static_cast<double>(killed) / static_cast<double>(competent);
}

CampaignReport score(std::vector<MutantResult> results, std::span<const OperatorKind> order) {
  CampaignReport report;
  std::map<OperatorKind, std::size_t> row;
  for (OperatorKind op : order) {
    if (row.contains(op)) continue;
    row[op] = report.operators.size();
    OperatorStats s;
    s.op = op;
    s.input_mutation = op == OperatorKind::kDfc;
    report.operators.push_back(s);
  }
  for (const auto& r : results) {
    auto it = row.find(r.op);
    if (it == row.end()) {
      it = row.emplace(r.op, report.operators.size()).first;
      OperatorStats s;
      s.op = r.op;
      s.input_mutation = r.input_mutation;
      report.operators.push_back(s);
    }
    OperatorStats& s = report.operators[it->second];
    ++s.total;
    if (std::holds_alternative<Killed>(r.verdict)) {
      ++s.killed;
    } else if (std::holds_alternative<Survived>(r.verdict)) {
      ++s.survived;
    } else {
      ++s.incompetent;
    }
  }
  for (const auto& s : report.operators) {
    report.killed += s.killed;
    report.survived += s.survived;
    report.incompetent += s.incompetent;
    report.total += s.total;
  }
  report.score = mutation_score(report.killed, report.killed + report.survived);
  if (report.score) report.survival = 100.0 - *report.score;
  report.results = std::move(results);
  return report;
}

namespace {

void check_width(std::span<const double> probabilities, const ShotCounts& counts) {
  if (probabilities.size() != counts.counts.size()) {
    throw Error(fmt::format("width mismatch: original has {} outcomes, mutant {}",
                            probabilities.size(), counts.counts.size()));
  }
}

}  // namespace

bool woo(std::span<const double> original_probabilities, const ShotCounts& mutant_counts,
         double threshold) {
  check_width(original_probabilities, mutant_counts);
  for (std::size_t o = 0; o < mutant_counts.counts.size(); ++o) {
    if (mutant_counts.counts[o] > 0 && original_probabilities[o] <= threshold) return true;
  }
  return false;
}

bool opo(std::span<const double> original_probabilities, const ShotCounts& mutant_counts,
         double tolerance, OpoMetric metric) {
  if (woo(original_probabilities, mutant_counts)) {
    throw Error("OPO applies only when every mutant outcome is valid; use the WOO verdict");
  }
  // Absorbs rounding in frequency arithmetic so a deviation of exactly the
  // tolerance does not kill.
  constexpr double kSlack = 1e-12;
  const double shots = static_cast<double>(mutant_counts.shots);
  double total = 0.0;
  for (std::size_t o = 0; o < mutant_counts.counts.size(); ++o) {
    const double dev =
        std::abs(static_cast<double>(mutant_counts.counts[o]) / shots - original_probabilities[o]);
    if (metric == OpoMetric::kPerOutcome && dev > tolerance + kSlack) return true;
    total += dev;
  }
  return metric == OpoMetric::kTotalVariation && 0.5 * total > tolerance + kSlack;
}

RawVerdict compare_circuits(const Circuit& original, const Circuit& mutant,
                            std::uint64_t shots, std::uint64_t seed, double tolerance,
                            OpoMetric metric) {
  if (original.measured_qubits().size() != mutant.measured_qubits().size()) {
    throw Error(fmt::format("width mismatch: original measures {} qubits, mutant {}",
                            original.measured_qubits().size(), mutant.measured_qubits().size()));
  }
  const auto probs = marginal_probabilities(run(original), original.measured_qubits());
  const ShotCounts counts = sample(run(mutant), mutant.measured_qubits(), shots, seed);
  RawVerdict v;
  v.woo_killed = woo(probs, counts);
  if (!v.woo_killed) v.opo_killed = opo(probs, counts, tolerance, metric);
  return v;
}

}  // namespace qmut
