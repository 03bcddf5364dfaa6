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

#ifndef QMUT_MODEL_H_
#define QMUT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmut/circuit.h"
#include "qmut/param_expr.h"

namespace qmut {

enum class FeatureMapKind { kZ, kZZ, kAmplitude };
enum class AnsatzKind { kRealAmplitudes, kEfficientSU2, kQcnn };

std::string_view to_string(FeatureMapKind kind);  // "ZFM", "ZZFM", "AE"
std::string_view to_string(AnsatzKind kind);      // "RA", "SU2", "QCNN"
FeatureMapKind parse_feature_map_kind(std::string_view name);
AnsatzKind parse_ansatz_kind(std::string_view name);

struct Block {
  BlockRole role = BlockRole::kRotation;
  /// Instruction indices in program order.
  std::vector<std::size_t> instructions;
};

struct Layer {
  std::vector<Block> blocks;
};

using LayerStructure = std::vector<Layer>;

/// Groups the ansatz-tagged instructions of `circuit` by (layer, block).
/// Layer and block indices must be dense; throws CircuitError otherwise.
LayerStructure layer_structure(const Circuit& circuit);

/// Maps a classical feature vector onto the feature-map symbols.
///
/// Angle maps (ZFM, ZZFM) bind x[i] directly. Amplitude embedding binds the
/// rotation angles of the state-preparation cascade, a[k], computed from the
/// L2-normalized, zero-padded feature vector.
struct FeatureEncoding {
  FeatureMapKind kind = FeatureMapKind::kZ;
  int num_qubits = 1;
  int num_features = 1;

  std::vector<std::string> symbols() const;
  Bindings encode(std::span<const double> features) const;
};

/// Bitstring -> class label. One measured qubit: the bit itself. Otherwise
/// the measured integer (qubit order, lowest measured qubit = bit 0) modulo
/// the class count.
struct Decoder {
  int num_classes = 2;
  int decode(std::uint64_t outcome, int width) const;
};

struct QnnModel {
  Circuit circuit;
  FeatureEncoding encoding;
  std::vector<std::string> feature_symbols;
  std::vector<std::string> weight_symbols;
  LayerStructure layers;
  int num_classes = 2;

  FeatureMapKind feature_map = FeatureMapKind::kZ;
  AnsatzKind ansatz = AnsatzKind::kRealAmplitudes;
  int feature_map_reps = 1;
  int ansatz_reps = 1;

  int num_qubits() const { return circuit.num_qubits(); }
  Decoder decoder() const { return Decoder{num_classes}; }

  /// Binding of features plus weights, ready for Circuit::bind.
  Bindings bindings(std::span<const double> features,
                    const Bindings& weights) const;

  /// Checks the section/symbol/layer invariants; throws CircuitError.
  void validate() const;

  /// Stable hex digest of the model structure.
  std::string fingerprint() const;
};

/// Gray-code angle transform used by the amplitude-embedding cascade: maps the
/// per-branch rotation angles of a k-control multiplexed RY to the angles of
/// its RY/CX decomposition.
std::vector<double> multiplexer_angles(std::span<const double> branch_angles);

}  // namespace qmut

#endif  // QMUT_MODEL_H_
