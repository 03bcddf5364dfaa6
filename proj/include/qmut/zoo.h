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

#ifndef QMUT_ZOO_H_
#define QMUT_ZOO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qmut/circuit.h"
#include "qmut/data.h"
#include "qmut/model.h"

namespace qmut {

enum class Entanglement { kLinear, kFull };

struct FeatureMapFragment {
  Circuit circuit;
  FeatureEncoding encoding;
};

/// ZFM and ZZFM use one qubit per feature. AE loads up to 2^num_qubits
/// features as amplitudes; `reps` and `entanglement` only affect ZFM/ZZFM.
FeatureMapFragment build_feature_map(FeatureMapKind kind, int num_qubits,
                                     int num_features, int reps = 1,
                                     Entanglement entanglement = Entanglement::kLinear);

struct AnsatzFragment {
  AnsatzKind kind = AnsatzKind::kRealAmplitudes;
  int reps = 1;
  Circuit circuit;
  /// w[0], w[1], ... in instruction order.
  std::vector<std::string> weight_symbols;
  std::vector<int> measured;
};

/// RA and SU2 have reps + 1 layers (the last one is a lone rotation layer).
/// QCNN alternates conv and pool layers until one active qubit is left;
/// `reps` is ignored there.
AnsatzFragment build_ansatz(AnsatzKind kind, int num_qubits, int reps = 1);

QnnModel assemble(const FeatureMapFragment& feature_map,
                  const AnsatzFragment& ansatz, int num_classes,
                  int feature_map_reps = 1);

struct ModelSpec {
  FeatureMapKind feature_map = FeatureMapKind::kZZ;
  int feature_map_reps = 1;
  Entanglement entanglement = Entanglement::kLinear;
  AnsatzKind ansatz = AnsatzKind::kRealAmplitudes;
  int ansatz_reps = 1;
  int num_features = 2;
  /// Only read for AE; angle maps use num_features qubits.
  int num_qubits = 0;
  int num_classes = 2;
};

QnnModel build_model(const ModelSpec& spec);

struct SpsaOptions {
  int iterations = 200;
  std::uint64_t seed = 0;
  std::uint64_t shots = 1000;
  double a = 1.0;
  double c = 0.2;
  double stability = 10.0;
  double alpha = 0.602;
  double gamma = 0.101;
};

struct TrainResult {
  Bindings weights;
  double loss = 1.0;
  int best_iteration = 0;
};

/// Fraction of shots decoding to a wrong label, averaged over the samples.
double shot_loss(const QnnModel& model, const Bindings& weights,
                 const Dataset& data, std::uint64_t shots, std::uint64_t seed);

/// Fraction of rows whose majority prediction matches the label.
double accuracy(const QnnModel& model, const Bindings& weights,
                const Dataset& data, std::uint64_t shots, std::uint64_t seed);

/// SPSA on shot_loss. Weights start uniform in [-pi, pi]; the best-loss
/// iterate is returned.
TrainResult train_spsa(const QnnModel& model, const Dataset& train,
                       const SpsaOptions& options);

/// {"fingerprint": ..., "weights": {symbol: radians}} with sorted keys.
void save_weights(const std::filesystem::path& path, const QnnModel& model,
                  const Bindings& weights);
/// Throws ConfigError if the fingerprint or symbol set does not match.
Bindings load_weights(const std::filesystem::path& path, const QnnModel& model);

}  // namespace qmut

#endif  // QMUT_ZOO_H_
