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

#include "qmut/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "qmut/error.h"
#include "qmut/random.h"

namespace qmut {

std::string_view to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::kZ: return "ZFM";
    case FeatureMapKind::kZZ: return "ZZFM";
    case FeatureMapKind::kAmplitude: return "AE";
  }
  return "?";
}

std::string_view to_string(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::kRealAmplitudes: return "RA";
    case AnsatzKind::kEfficientSU2: return "SU2";
    case AnsatzKind::kQcnn: return "QCNN";
  }
  return "?";
}

FeatureMapKind parse_feature_map_kind(std::string_view name) {
  for (auto k : {FeatureMapKind::kZ, FeatureMapKind::kZZ, FeatureMapKind::kAmplitude}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown feature map '{}' (ZFM, ZZFM, AE)", name));
}

AnsatzKind parse_ansatz_kind(std::string_view name) {
  for (auto k : {AnsatzKind::kRealAmplitudes, AnsatzKind::kEfficientSU2, AnsatzKind::kQcnn}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown ansatz '{}' (RA, SU2, QCNN)", name));
}

LayerStructure layer_structure(const Circuit& circuit) {
  std::map<int, std::map<int, Block>> grouped;
  const auto insts = circuit.instructions();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const AnsatzTag* tag = insts[i].ansatz_tag();
    if (!tag) continue;
    Block& b = grouped[tag->layer][tag->block];
    if (!b.instructions.empty() && b.role != tag->role) {
      throw CircuitError(fmt::format("layer {} block {} mixes block roles",
                                     tag->layer, tag->block));
    }
    b.role = tag->role;
    b.instructions.push_back(i);
  }
  LayerStructure layers;
  int expected_layer = 0;
  for (auto& [li, blocks] : grouped) {
    if (li != expected_layer++) {
      throw CircuitError(fmt::format("layer indices not dense at {}", li));
    }
    Layer layer;
    int expected_block = 0;
    for (auto& [bi, block] : blocks) {
      if (bi != expected_block++) {
        throw CircuitError(fmt::format("layer {}: block indices not dense at {}", li, bi));
      }
      layer.blocks.push_back(std::move(block));
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<double> multiplexer_angles(std::span<const double> branch_angles) {
  // Branch j sees sum_i (-1)^{popcount(j & gray(i))} theta_i, so theta is the
  // (scaled) transpose of that sign matrix applied to the branch angles.
  const std::size_t n = branch_angles.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gray = i ^ (i >> 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += (std::popcount(j & gray) % 2 ? -1.0 : 1.0) * branch_angles[j];
    }
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<std::string> FeatureEncoding::symbols() const {
  std::vector<std::string> out;
  if (kind == FeatureMapKind::kAmplitude) {
    const std::size_t count = (std::size_t{1} << num_qubits) - 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(fmt::format("a[{}]", k));
  } else {
    for (int i = 0; i < num_features; ++i) out.push_back(fmt::format("x[{}]", i));
  }
  return out;
}

Bindings FeatureEncoding::encode(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != num_features) {
    throw BindError(fmt::format("expected {} features, got {}", num_features,
                                features.size()));
  }
  Bindings out;
  if (kind != FeatureMapKind::kAmplitude) {
    for (int i = 0; i < num_features; ++i) {
      out.emplace(fmt::format("x[{}]", i), features[i]);
    }
    return out;
  }

  const std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<double> v(dim, 0.0);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    v[i] = features[i];
    norm2 += v[i] * v[i];
  }
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw BindError("amplitude embedding needs a non-zero finite feature vector");
  }
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;

  // sq[t][j]: squared norm of the subtree of 2^t amplitudes with prefix j.
  std::vector<std::vector<double>> sq(num_qubits + 1);
  sq[0].resize(dim);
  for (std::size_t i = 0; i < dim; ++i) sq[0][i] = v[i] * v[i];
  for (int t = 1; t <= num_qubits; ++t) {
    sq[t].resize(dim >> t);
    for (std::size_t j = 0; j < sq[t].size(); ++j) {
      sq[t][j] = sq[t - 1][2 * j] + sq[t - 1][2 * j + 1];
    }
  }

  std::size_t next = 0;
  for (int target = num_qubits - 1; target >= 0; --target) {
    const std::size_t branches = std::size_t{1} << (num_qubits - 1 - target);
    std::vector<double> alpha(branches);
    for (std::size_t j = 0; j < branches; ++j) {
      if (target == 0) {
        // Leaf level keeps the amplitude signs.
        alpha[j] = 2.0 * std::atan2(v[2 * j + 1], v[2 * j]);
      } else {
        alpha[j] = 2.0 * std::atan2(std::sqrt(sq[target][2 * j + 1]),
                                    std::sqrt(sq[target][2 * j]));
      }
    }
    for (double theta : multiplexer_angles(alpha)) {
      out.emplace(fmt::format("a[{}]", next++), theta);
    }
  }
  return out;
}

int Decoder::decode(std::uint64_t outcome, int width) const {
  if (width == 1) return static_cast<int>(outcome & 1);
  return static_cast<int>(outcome % static_cast<std::uint64_t>(num_classes));
}

Bindings QnnModel::bindings(std::span<const double> features,
                            const Bindings& weights) const {
  Bindings b = encoding.encode(features);
  for (const auto& [k, v] : weights) b.insert_or_assign(k, v);
  return b;
}

void QnnModel::validate() const {
  const std::set<std::string> features(feature_symbols.begin(), feature_symbols.end());
  const std::set<std::string> weights(weight_symbols.begin(), weight_symbols.end());
  std::map<std::string, std::pair<int, int>> owner;
  for (const auto& inst : circuit.instructions()) {
    if (!inst.angle) continue;
    for (const auto& s : inst.angle->free_symbols()) {
      if (inst.in_feature_map()) {
        if (!features.contains(s)) {
          throw CircuitError("feature map uses non-feature symbol " + s);
        }
      } else if (const AnsatzTag* tag = inst.ansatz_tag()) {
        if (!weights.contains(s)) {
          throw CircuitError("ansatz uses non-weight symbol " + s);
        }
        auto [it, inserted] = owner.try_emplace(s, tag->layer, tag->block);
        if (!inserted && it->second != std::pair{tag->layer, tag->block}) {
          throw CircuitError("weight " + s + " appears in more than one block");
        }
      } else {
        throw CircuitError("symbol " + s + " outside feature map and ansatz");
      }
    }
  }
  for (const auto& w : weight_symbols) {
    if (!owner.contains(w)) throw CircuitError("weight " + w + " is unused");
  }
  std::size_t covered = 0;
  for (const auto& layer : layers) {
    for (const auto& block : layer.blocks) covered += block.instructions.size();
  }
  const auto tagged = std::count_if(
      circuit.instructions().begin(), circuit.instructions().end(),
      [](const Instruction& i) { return i.ansatz_tag() != nullptr; });
  if (covered != static_cast<std::size_t>(tagged)) {
    throw CircuitError("layer structure does not cover the ansatz");
  }
}

std::string QnnModel::fingerprint() const {
  std::string text = canonical_form(circuit);
  text += fmt::format("|{}|{}|{}|{}|{}|{}|", to_string(feature_map),
                      feature_map_reps, to_string(ansatz), ansatz_reps,
                      num_classes, encoding.num_features);
  text += fmt::format("{}", fmt::join(weight_symbols, ","));
  return fmt::format("{:016x}", fnv1a(text));
}

}  // namespace qmut
