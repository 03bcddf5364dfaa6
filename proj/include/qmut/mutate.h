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

#ifndef QMUT_MUTATE_H_
#define QMUT_MUTATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qmut/circuit.h"
#include "qmut/data.h"
#include "qmut/model.h"

namespace qmut {

enum class OperatorKind {
  // Directed QML operators.
  kApc,
  kDfc,
  kApgc,
  kLs,
  kIls,
  kAla,
  kAld,
  // Baseline gate/measurement operators.
  kGateAdd,
  kGateRemove,
  kGateReplace,
  kMeasAdd,
  kMeasRemove,
};

inline constexpr std::array<OperatorKind, 7> kDirectedOperators = {
    OperatorKind::kApc, OperatorKind::kDfc, OperatorKind::kApgc, OperatorKind::kLs,
    OperatorKind::kIls, OperatorKind::kAla, OperatorKind::kAld};
inline constexpr std::array<OperatorKind, 5> kBaselineOperators = {
    OperatorKind::kGateAdd, OperatorKind::kGateRemove, OperatorKind::kGateReplace,
    OperatorKind::kMeasAdd, OperatorKind::kMeasRemove};

/// "APC", "DFC", ..., "Add", "Delete", "Change", "MeasAdd", "MeasRemove".
std::string_view operator_name(OperatorKind kind);
/// Accepts operator_name spellings (case-insensitive) and the group names
/// "directed", "baseline", "all". Throws ConfigError.
std::vector<OperatorKind> parse_operators(std::string_view name);
bool is_directed(OperatorKind kind);

// --- descriptors ---------------------------------------------------------

struct ApcChange {
  enum class Kind { kZero, kSignFlip, kAdd, kScale };
  Kind kind = Kind::kZero;
  double value = 0.0;  // delta for kAdd, factor for kScale
  ParamExpr apply(const ParamExpr& angle) const;
  friend bool operator==(const ApcChange&, const ApcChange&) = default;
};

struct FeatureOp {
  enum class Kind { kAdd, kMul, kSignFlip, kOneMinus };
  Kind kind = Kind::kAdd;
  double value = 0.0;
  double apply(double x) const;
  std::string to_string() const;
  friend bool operator==(const FeatureOp&, const FeatureOp&) = default;
};

enum class ImageOp { kCrop, kRot90, kRot180, kRot270, kFlipH, kFlipV };
std::string_view to_string(ImageOp op);

/// Feature-space rewrite applied to a sample before it is encoded.
struct InputTransform {
  struct Pair {
    int first = 0;
    int second = 1;
    FeatureOp first_op;
    FeatureOp second_op;
    friend bool operator==(const Pair&, const Pair&) = default;
  };
  struct Image {
    ImageOp op = ImageOp::kFlipH;
    int height = 0;
    int width = 0;
    friend bool operator==(const Image&, const Image&) = default;
  };
  std::variant<Pair, Image> spec;

  std::vector<double> apply(std::span<const double> features) const;
  std::string to_string() const;
  friend bool operator==(const InputTransform&, const InputTransform&) = default;
};

struct ApcDescriptor {
  int layer = 0;
  ApcChange change;
};
struct DfcDescriptor {
  InputTransform transform;
};
struct ApgcDescriptor {
  std::size_t gate = 0;
  GateKind from = GateKind::kRY;
  GateKind to = GateKind::kRZ;
};
struct LsDescriptor {
  int first = 0;
  int second = 1;
};
struct IlsDescriptor {
  int layer = 0;
  std::vector<int> block_order;
};
enum class AlaInit { kRandom, kCopy };
struct AlaDescriptor {
  int after_layer = 0;
  AlaInit init = AlaInit::kRandom;
  std::uint64_t seed = 0;
};
enum class AldTarget { kFull, kRotationsOnly, kEntanglersOnly };
struct AldDescriptor {
  int layer = 0;
  AldTarget target = AldTarget::kFull;
};
struct GateAddDescriptor {
  GateKind kind = GateKind::kX;
  std::vector<int> qubits;
  std::size_t position = 0;  // inserted before this instruction index
};
struct GateRemoveDescriptor {
  std::size_t gate = 0;
};
struct GateReplaceDescriptor {
  std::size_t gate = 0;
  GateKind from = GateKind::kX;
  GateKind to = GateKind::kY;
};
struct MeasAddDescriptor {
  int qubit = 0;
};
struct MeasRemoveDescriptor {
  int qubit = 0;
};

using Descriptor =
    std::variant<ApcDescriptor, DfcDescriptor, ApgcDescriptor, LsDescriptor,
                 IlsDescriptor, AlaDescriptor, AldDescriptor, GateAddDescriptor,
                 GateRemoveDescriptor, GateReplaceDescriptor, MeasAddDescriptor,
                 MeasRemoveDescriptor>;

OperatorKind operator_of(const Descriptor& descriptor);
nlohmann::json to_json(const Descriptor& descriptor);

// --- mutants -------------------------------------------------------------

struct Mutant {
  std::string id;
  Descriptor descriptor;
  /// Mutated circuit, or for DFC an input transform run on the original.
  std::variant<Circuit, InputTransform> payload;
  /// Values for symbols the mutation introduced (ALA random layers).
  Bindings extra_bindings;
  /// Non-empty marks the mutant incompetent.
  std::string incompetent_reason;
  std::string source_fingerprint;

  OperatorKind op() const { return operator_of(descriptor); }
  bool incompetent() const { return !incompetent_reason.empty(); }
  bool is_input_mutation() const {
    return std::holds_alternative<InputTransform>(payload);
  }
  const Circuit* circuit() const { return std::get_if<Circuit>(&payload); }
};

struct MutationConfig {
  std::vector<double> apc_add = {-std::numbers::pi, -std::numbers::pi / 2,
                                 std::numbers::pi / 2, std::numbers::pi};
  std::vector<double> apc_scale = {0.5, 2.0};
  std::vector<double> dfc_add = {std::numbers::pi / 2, std::numbers::pi};
  std::vector<double> dfc_mul = {0.5, 2.0};
  bool dfc_all_pairs = false;
  bool ils_full_permutations = false;
  std::vector<GateKind> gate_set{kAllGateKinds.begin(), kAllGateKinds.end()};
  double gate_add_angle = std::numbers::pi / 2;
  std::uint64_t seed = 0;
};

struct Generation {
  std::vector<Mutant> mutants;
  /// Skipped layers and similar diagnostics.
  std::vector<std::string> notes;
};

Generation gen_apc(const QnnModel& model, const MutationConfig& config);
Generation gen_dfc(const QnnModel& model, const FeatureShape& shape,
                   const MutationConfig& config);
Generation gen_apgc(const QnnModel& model, const MutationConfig& config);
Generation gen_ls(const QnnModel& model, const MutationConfig& config);
Generation gen_ils(const QnnModel& model, const MutationConfig& config);
Generation gen_ala(const QnnModel& model, const MutationConfig& config);
Generation gen_ald(const QnnModel& model, const MutationConfig& config);
Generation gen_gate_add(const QnnModel& model, const MutationConfig& config);
Generation gen_gate_remove(const QnnModel& model, const MutationConfig& config);
Generation gen_gate_replace(const QnnModel& model, const MutationConfig& config);
Generation gen_meas_add(const QnnModel& model, const MutationConfig& config);
Generation gen_meas_remove(const QnnModel& model, const MutationConfig& config);

/// Dispatches to the generator for `kind`. Mutant ids are
/// "<operator>_<index>" in generation order.
Generation generate(OperatorKind kind, const QnnModel& model,
                    const FeatureShape& shape, const MutationConfig& config);

// Rewrites used by the generators, exposed for property tests. Layer indices
// refer to AnsatzTag::layer.
Circuit apply_apc(const Circuit& circuit, int layer, const ApcChange& change);
Circuit swap_layers(const Circuit& circuit, int first, int second);
Circuit reorder_blocks(const Circuit& circuit, int layer,
                       std::span<const int> block_order);
std::vector<double> apply_image_op(std::span<const double> image, int height,
                                   int width, ImageOp op);

// --- redundancy filter ---------------------------------------------------

struct DedupOptions {
  /// Also merge circuits whose statevectors agree (up to global phase) on
  /// probe bindings, not only equal canonical forms.
  bool semantic = true;
  int probes = 3;
  int max_qubits = 12;
};

struct DedupRecord {
  std::string discarded;
  std::string kept;
  std::string reason;  // "canonical", "statevector" or "transform"
};

struct DedupResult {
  std::vector<Mutant> kept;
  std::vector<DedupRecord> discarded;
};

/// Keeps the first mutant of each equivalence class, in input order.
/// Incompetent mutants are never merged.
DedupResult dedup(std::vector<Mutant> mutants, const DedupOptions& options = {});

/// Statevector-equivalence probe used by dedup: deterministic pseudo-random
/// value in [-pi, pi] for a symbol.
double probe_value(std::string_view symbol, int probe);

}  // namespace qmut

#endif  // QMUT_MUTATE_H_
