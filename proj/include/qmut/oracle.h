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

#ifndef QMUT_ORACLE_H_
#define QMUT_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qmut/data.h"
#include "qmut/model.h"
#include "qmut/mutate.h"
#include "qmut/sim.h"

namespace qmut {

struct TestSample {
  std::size_t id = 0;  // row in the held-out set; also the seed index
  std::vector<double> features;
  int label = 0;
};

/// Held-out samples the original model gets right.
struct TestSuite {
  std::vector<TestSample> samples;
  std::vector<std::size_t> rejected;
  std::vector<int> rejected_predictions;
  std::string fingerprint;
};

/// Throws Error("empty test suite") when no sample is predicted correctly.
TestSuite build_test_suite(const QnnModel& model, const Bindings& weights,
                           const Dataset& test_set, std::uint64_t shots,
                           std::uint64_t seed);

struct Killed {
  std::size_t first_sample = 0;  // suite sample id
};
struct Survived {};
struct Incompetent {
  std::string reason;
};
using Verdict = std::variant<Killed, Survived, Incompetent>;

std::string verdict_name(const Verdict& verdict);  // "killed", ...

struct MutantResult {
  std::string id;
  OperatorKind op = OperatorKind::kApc;
  bool input_mutation = false;
  Verdict verdict;
  /// One label per suite sample, in suite order; empty when incompetent.
  std::vector<int> predictions;
};

/// Circuit mutants are run on every suite sample; DFC mutants run the
/// original circuit on transformed features. Every sample is evaluated even
/// after the first kill so the kill matrix is complete. Sample i uses
/// evaluation_seed(campaign_seed, id), the same seed the suite was built
/// with, so an unchanged circuit reproduces the suite's predictions.
MutantResult evaluate_mutant(const Mutant& mutant, const QnnModel& model,
                             const Bindings& weights, const TestSuite& suite,
                             std::uint64_t shots, std::uint64_t campaign_seed);

/// Evaluates mutants on up to `workers` threads. The result order matches
/// the input order and does not depend on the worker count.
std::vector<MutantResult> evaluate_all(std::span<const Mutant> mutants,
                                       const QnnModel& model,
                                       const Bindings& weights,
                                       const TestSuite& suite,
                                       std::uint64_t shots,
                                       std::uint64_t campaign_seed,
                                       unsigned workers);

/// |killed| / |competent| * 100, or nullopt when nothing is competent.
std::optional<double> mutation_score(std::size_t killed, std::size_t competent);

struct OperatorStats {
  OperatorKind op = OperatorKind::kApc;
  std::size_t killed = 0;
  std::size_t survived = 0;
  std::size_t incompetent = 0;
  std::size_t total = 0;
  std::size_t discarded = 0;  // redundant mutants removed before evaluation
  bool input_mutation = false;
  std::optional<double> mutation_score() const {
    return qmut::mutation_score(killed, killed + survived);
  }
};

struct CampaignReport {
  std::vector<OperatorStats> operators;
  std::size_t killed = 0;
  std::size_t survived = 0;
  std::size_t incompetent = 0;
  std::size_t total = 0;
  std::optional<double> score;     // percent
  std::optional<double> survival;  // percent
  std::vector<MutantResult> results;
};

/// Aggregates results; `order` fixes the operator rows (operators without
/// results still get an all-zero row).
CampaignReport score(std::vector<MutantResult> results,
                     std::span<const OperatorKind> order);

// --- raw-circuit oracles ---------------------------------------------------

/// Wrong-output oracle: true when the mutant produced any outcome whose
/// exact probability under the original is at most `threshold`.
bool woo(std::span<const double> original_probabilities,
         const ShotCounts& mutant_counts, double threshold = 1e-12);

enum class OpoMetric { kPerOutcome, kTotalVariation };

/// Output-probability oracle. Needs every mutant outcome to be valid under
/// WOO (throws Error otherwise). Kills when a per-outcome absolute deviation
/// (or the total-variation distance) strictly exceeds `tolerance`.
bool opo(std::span<const double> original_probabilities,
         const ShotCounts& mutant_counts, double tolerance = 0.05,
         OpoMetric metric = OpoMetric::kPerOutcome);

struct RawVerdict {
  bool woo_killed = false;
  bool opo_killed = false;
  bool killed() const { return woo_killed || opo_killed; }
};

/// Both circuits bound and measuring the same number of qubits.
RawVerdict compare_circuits(const Circuit& original, const Circuit& mutant,
                            std::uint64_t shots, std::uint64_t seed,
                            double tolerance = 0.05,
                            OpoMetric metric = OpoMetric::kPerOutcome);

}  // namespace qmut

#endif  // QMUT_ORACLE_H_
