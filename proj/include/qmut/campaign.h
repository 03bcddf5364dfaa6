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

#ifndef QMUT_CAMPAIGN_H_
#define QMUT_CAMPAIGN_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmut/data.h"
#include "qmut/model.h"
#include "qmut/mutate.h"
#include "qmut/oracle.h"
#include "qmut/zoo.h"

namespace qmut {

struct DatasetConfig {
  enum class Source { kBlobs, kCsv, kImages };
  Source source = Source::kBlobs;
  std::string path;
  std::string label_column = "label";
  // CSV image data: pixels per row, row-major.
  int image_height = 0;
  int image_width = 0;
  // Synthetic generators.
  int per_class = 30;
  int features = 4;
  int classes = 2;
  double separation = 10.0;
  // Preprocessing, applied in this order.
  std::optional<int> one_vs_rest;
  std::optional<std::pair<int, int>> resize;
  std::optional<int> pca;
  std::optional<std::pair<double, double>> scale;  // default: [0, pi] tabular, [0, 1] images
  bool scale_enabled = true;
  std::uint64_t split_seed = 0;
  int test_size = 20;
};

struct ModelConfig {
  FeatureMapKind feature_map = FeatureMapKind::kZZ;
  int feature_map_reps = 1;
  Entanglement entanglement = Entanglement::kLinear;
  AnsatzKind ansatz = AnsatzKind::kRealAmplitudes;
  int ansatz_reps = 1;
  int qubits = 0;   // AE only; 0 = smallest width that fits
  int classes = 0;  // 0 = from the dataset
};

struct TrainingConfig {
  int iterations = 200;
  std::optional<std::uint64_t> seed;  // default: campaign seed
  std::string weights;                // load instead of training
  double a = 1.0;
  double c = 0.2;
};

struct CampaignConfig {
  std::string name = "campaign";
  DatasetConfig dataset;
  ModelConfig model;
  TrainingConfig training;
  std::vector<OperatorKind> operators;
  MutationConfig mutation;
  bool dedup_enabled = true;
  DedupOptions dedup;
  std::uint64_t shots = kDefaultShots;
  std::uint64_t seed = 0;
  std::string output = "qmut-out";

  /// Validates against the schema; unknown keys and bad values throw
  /// ConfigError naming the offending path.
  static CampaignConfig from_json(const nlohmann::json& j);
  static CampaignConfig load(const std::filesystem::path& path);
};

struct PreparedData {
  Dataset train;
  Dataset test;
};

PreparedData prepare_data(const DatasetConfig& config);
QnnModel build_campaign_model(const CampaignConfig& config, const Dataset& data);

struct OperatorTiming {
  double generation_seconds = 0.0;
  double evaluation_seconds = 0.0;
};

struct Timings {
  double data_seconds = 0.0;
  double training_seconds = 0.0;
  double suite_seconds = 0.0;
  double generation_seconds = 0.0;  // generators only, no simulation
  double dedup_seconds = 0.0;
  double export_seconds = 0.0;
  double evaluation_seconds = 0.0;
  std::map<OperatorKind, OperatorTiming> per_operator;
};

struct MutationSet {
  std::vector<Mutant> mutants;  // after dedup, generation order
  std::vector<DedupRecord> discarded;
  std::vector<Descriptor> discarded_descriptors;  // parallel to `discarded`
  std::map<OperatorKind, std::size_t> generated;
  std::map<OperatorKind, std::size_t> discarded_count;
  std::vector<std::string> notes;
};

struct CampaignResult {
  CampaignConfig config;
  PreparedData data;
  QnnModel model;
  Bindings weights;
  double training_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::optional<TestSuite> suite;
  MutationSet mutations;
  std::optional<CampaignReport> report;
  Timings timings;
};

enum class Stage { kTrain, kMutate, kEvaluate };

struct RunOptions {
  unsigned workers = 1;
  Stage until = Stage::kEvaluate;
  bool write_artifacts = true;
};

/// Generates, filters and ids the mutants of every selected operator.
MutationSet generate_mutants(const CampaignConfig& config, const QnnModel& model,
                             const FeatureShape& shape, Timings* timings = nullptr);

/// The full pipeline. Errors are rethrown as Error("<stage>: <message>").
CampaignResult run_campaign(const CampaignConfig& config, const RunOptions& options);

/// The bound circuit written to a mutant's QASM file: the mutant circuit (or
/// the original one for DFC) bound to `sample`'s features (transformed for
/// DFC), the weights and the mutant's extra bindings.
Circuit export_circuit(const Mutant& mutant, const QnnModel& model,
                       const Bindings& weights, const TestSample& sample);

}  // namespace qmut

#endif  // QMUT_CAMPAIGN_H_
