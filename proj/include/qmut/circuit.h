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

#ifndef QMUT_CIRCUIT_H_
#define QMUT_CIRCUIT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qmut/param_expr.h"

namespace qmut {

enum class GateKind : std::uint8_t {
  kH,
  kX,
  kY,
  kZ,
  kS,
  kT,
  kP,
  kRX,
  kRY,
  kRZ,
  kCX,
  kCZ,
  kCP,
  kCRY,
  kSWAP,
};

inline constexpr std::array<GateKind, 15> kAllGateKinds = {
    GateKind::kH,  GateKind::kX,  GateKind::kY,   GateKind::kZ,
    GateKind::kS,  GateKind::kT,  GateKind::kP,   GateKind::kRX,
    GateKind::kRY, GateKind::kRZ, GateKind::kCX,  GateKind::kCZ,
    GateKind::kCP, GateKind::kCRY, GateKind::kSWAP,
};

int arity(GateKind kind);
bool is_parameterized(GateKind kind);
/// Lower-case OpenQASM 3 stdgates name ("h", "ry", "cx", ...).
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);

enum class BlockRole : std::uint8_t { kRotation, kEntangle };

struct Untagged {
  friend bool operator==(const Untagged&, const Untagged&) = default;
};
struct FeatureMapTag {
  friend bool operator==(const FeatureMapTag&, const FeatureMapTag&) = default;
};
struct AnsatzTag {
  int layer = 0;
  int block = 0;
  BlockRole role = BlockRole::kRotation;
  friend bool operator==(const AnsatzTag&, const AnsatzTag&) = default;
};
struct MeasurementTag {
  friend bool operator==(const MeasurementTag&, const MeasurementTag&) = default;
};

/// Which part of a QNN an instruction belongs to.
using SectionTag = std::variant<Untagged, FeatureMapTag, AnsatzTag, MeasurementTag>;

struct Instruction {
  GateKind kind = GateKind::kH;
  /// For controlled gates qubits[0] is the control.
  std::vector<int> qubits;
  std::optional<ParamExpr> angle;
  SectionTag tag;

  const AnsatzTag* ansatz_tag() const { return std::get_if<AnsatzTag>(&tag); }
  bool in_feature_map() const {
    return std::holds_alternative<FeatureMapTag>(tag);
  }
};

Instruction make_gate(GateKind kind, std::vector<int> qubits,
                      std::optional<ParamExpr> angle = std::nullopt,
                      SectionTag tag = Untagged{});

/// Gate-level circuit: qubit count, ordered instructions, measured qubits.
///
/// Every mutating entry point validates its input, so a Circuit that exists
/// always satisfies the structural invariants: qubit indices in range and
/// distinct per instruction, angle present iff the gate kind takes one,
/// measured qubits sorted, unique, and in range.
class Circuit {
 public:
  explicit Circuit(int num_qubits = 1);
  Circuit(int num_qubits, std::vector<Instruction> instructions,
          std::vector<int> measured_qubits = {});

  int num_qubits() const { return num_qubits_; }
  std::span<const Instruction> instructions() const { return instructions_; }
  const Instruction& instruction(std::size_t i) const {
    return instructions_.at(i);
  }
  std::size_t size() const { return instructions_.size(); }
  bool empty() const { return instructions_.empty(); }
  const std::vector<int>& measured_qubits() const { return measured_; }

  void append(Instruction instruction);
  void append(const Circuit& other);
  void measure(int qubit);
  void set_measured(std::vector<int> qubits);

  /// Returns a copy with `instruction` appended.
  Circuit appended(Instruction instruction) const;

  std::set<std::string> free_symbols() const;
  bool is_bound() const;

  /// Evaluates every angle to a constant. Throws BindError listing every
  /// missing symbol.
  Circuit bind(const Bindings& bindings) const;
  /// Replaces only the symbols present in `bindings`.
  Circuit substitute(const Bindings& bindings) const;

  friend bool operator==(const Circuit& a, const Circuit& b);

 private:
  void validate(const Instruction& instruction) const;

  int num_qubits_;
  std::vector<Instruction> instructions_;
  std::vector<int> measured_;
};

/// Greedy left-packed time slices. Each slice lists instruction indices in
/// program order; an instruction lands in the slice right after the last
/// slice touching any of its qubits.
std::vector<std::vector<std::size_t>> moments(const Circuit& circuit);

/// Deterministic serialization that is invariant under reordering of gates
/// that share a moment. Section tags are not part of the form.
std::string canonical_form(const Circuit& circuit);

/// One-line text form of a single instruction, e.g. "ry(x[0]) q[1]".
std::string to_string(const Instruction& instruction);

}  // namespace qmut

#endif  // QMUT_CIRCUIT_H_
