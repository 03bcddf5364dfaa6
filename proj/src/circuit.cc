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

#include "qmut/circuit.h"

#include <algorithm>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "qmut/error.h"

namespace qmut {

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::kCX:
    case GateKind::kCZ:
    case GateKind::kCP:
    case GateKind::kCRY:
    case GateKind::kSWAP:
      return 2;
    default:
      return 1;
  }
}

bool is_parameterized(GateKind kind) {
  switch (kind) {
    case GateKind::kP:
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
    case GateKind::kCP:
    case GateKind::kCRY:
      return true;
    default:
      return false;
  }
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kH: return "h";
    case GateKind::kX: return "x";
    case GateKind::kY: return "y";
    case GateKind::kZ: return "z";
    case GateKind::kS: return "s";
    case GateKind::kT: return "t";
    case GateKind::kP: return "p";
    case GateKind::kRX: return "rx";
    case GateKind::kRY: return "ry";
    case GateKind::kRZ: return "rz";
    case GateKind::kCX: return "cx";
    case GateKind::kCZ: return "cz";
    case GateKind::kCP: return "cp";
    case GateKind::kCRY: return "cry";
    case GateKind::kSWAP: return "swap";
  }
  return "?";
}

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (gate_name(k) == name) return k;
  }
  return std::nullopt;
}

Instruction make_gate(GateKind kind, std::vector<int> qubits,
                      std::optional<ParamExpr> angle, SectionTag tag) {
  return Instruction{kind, std::move(qubits), std::move(angle), tag};
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) {
    throw CircuitError(fmt::format("circuit width must be >= 1, got {}", num_qubits));
  }
}

Circuit::Circuit(int num_qubits, std::vector<Instruction> instructions,
                 std::vector<int> measured_qubits)
    : Circuit(num_qubits) {
  for (const auto& inst : instructions) validate(inst);
  instructions_ = std::move(instructions);
  set_measured(std::move(measured_qubits));
}

void Circuit::validate(const Instruction& inst) const {
  const auto name = gate_name(inst.kind);
  if (static_cast<int>(inst.qubits.size()) != arity(inst.kind)) {
    throw CircuitError(fmt::format("{} expects {} qubit(s), got {}", name,
                                   arity(inst.kind), inst.qubits.size()));
  }
  for (int q : inst.qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw CircuitError(fmt::format("{}: qubit {} out of range for width {}",
                                     name, q, num_qubits_));
    }
  }
  if (inst.qubits.size() == 2 && inst.qubits[0] == inst.qubits[1]) {
    throw CircuitError(fmt::format("{}: duplicate qubit {}", name, inst.qubits[0]));
  }
  if (is_parameterized(inst.kind) && !inst.angle) {
    throw CircuitError(fmt::format("{}: missing angle", name));
  }
  if (!is_parameterized(inst.kind) && inst.angle) {
    throw CircuitError(fmt::format("{}: takes no angle", name));
  }
}

void Circuit::append(Instruction instruction) {
  validate(instruction);
  instructions_.push_back(std::move(instruction));
}

void Circuit::append(const Circuit& other) {
  if (other.num_qubits_ > num_qubits_) {
    throw CircuitError("appended circuit is wider than target");
  }
  for (const auto& inst : other.instructions_) append(inst);
}

void Circuit::measure(int qubit) {
  auto m = measured_;
  m.push_back(qubit);
  set_measured(std::move(m));
}

void Circuit::set_measured(std::vector<int> qubits) {
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw CircuitError(fmt::format("measured qubit {} out of range", q));
    }
  }
  std::sort(qubits.begin(), qubits.end());
  qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
  measured_ = std::move(qubits);
}

Circuit Circuit::appended(Instruction instruction) const {
  Circuit c = *this;
  c.append(std::move(instruction));
  return c;
}

std::set<std::string> Circuit::free_symbols() const {
  std::set<std::string> out;
  for (const auto& inst : instructions_) {
    if (inst.angle) inst.angle->collect_symbols(out);
  }
  return out;
}

bool Circuit::is_bound() const {
  return std::none_of(instructions_.begin(), instructions_.end(),
                      [](const Instruction& i) {
                        return i.angle && !i.angle->is_constant();
                      });
}

Circuit Circuit::bind(const Bindings& bindings) const {
  std::vector<std::string> missing;
  for (const auto& s : free_symbols()) {
    if (!bindings.contains(s)) missing.push_back(s);
  }
  if (!missing.empty()) {
    throw BindError(fmt::format("missing symbol(s): {}", fmt::join(missing, ", ")));
  }
  Circuit out = *this;
  for (auto& inst : out.instructions_) {
    if (inst.angle && !inst.angle->is_constant()) {
      inst.angle = ParamExpr::constant(inst.angle->evaluate(bindings));
    }
  }
  return out;
}

Circuit Circuit::substitute(const Bindings& bindings) const {
  Circuit out = *this;
  for (auto& inst : out.instructions_) {
    if (inst.angle && inst.angle->has_symbols()) {
      inst.angle = inst.angle->substitute(bindings);
    }
  }
  return out;
}

bool operator==(const Circuit& a, const Circuit& b) {
  if (a.num_qubits_ != b.num_qubits_ || a.measured_ != b.measured_ ||
      a.instructions_.size() != b.instructions_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.instructions_.size(); ++i) {
    const auto& x = a.instructions_[i];
    const auto& y = b.instructions_[i];
    if (x.kind != y.kind || x.qubits != y.qubits || x.tag != y.tag ||
        x.angle.has_value() != y.angle.has_value()) {
      return false;
    }
    if (x.angle && !(*x.angle == *y.angle)) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> moments(const Circuit& circuit) {
  std::vector<int> next_free(circuit.num_qubits(), 0);
  std::vector<std::vector<std::size_t>> slices;
  const auto insts = circuit.instructions();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    int slot = 0;
    for (int q : insts[i].qubits) slot = std::max(slot, next_free[q]);
    if (slot >= static_cast<int>(slices.size())) slices.resize(slot + 1);
    slices[slot].push_back(i);
    for (int q : insts[i].qubits) next_free[q] = slot + 1;
  }
  return slices;
}

std::string to_string(const Instruction& inst) {
  std::string out(gate_name(inst.kind));
  if (inst.angle) {
    out += '(';
    out += inst.angle->to_string();
    out += ')';
  }
  for (std::size_t k = 0; k < inst.qubits.size(); ++k) {
    out += k == 0 ? " " : ", ";
    out += fmt::format("q[{}]", inst.qubits[k]);
  }
  return out;
}

std::string canonical_form(const Circuit& circuit) {
  std::string out = fmt::format("n={};m={};", circuit.num_qubits(),
                                fmt::join(circuit.measured_qubits(), ","));
  const auto insts = circuit.instructions();
  for (const auto& slice : moments(circuit)) {
    // Qubit sets within a moment are disjoint, so the lowest qubit alone
    // orders the slice; kind and angle only break ties that cannot occur.
    std::vector<std::tuple<int, int, std::string>> keyed;
    keyed.reserve(slice.size());
    for (std::size_t idx : slice) {
      const auto& inst = insts[idx];
      const int low = *std::min_element(inst.qubits.begin(), inst.qubits.end());
      keyed.emplace_back(low, static_cast<int>(inst.kind), to_string(inst));
    }
    std::sort(keyed.begin(), keyed.end());
    out += '|';
    for (const auto& [low, kind, text] : keyed) {
      out += text;
      out += ';';
    }
  }
  return out;
}

}  // namespace qmut
