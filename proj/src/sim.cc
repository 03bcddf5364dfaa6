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

#include "qmut/sim.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "qmut/error.h"
#include "qmut/random.h"

namespace qmut {

Statevector::Statevector(int num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
  if (num_qubits < 1 || num_qubits > 24) {
    throw CircuitError(fmt::format("unsupported statevector width {}", num_qubits));
  }
  amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    throw CircuitError("amplitude count must be a power of two");
  }
  Statevector s(std::countr_zero(n));
  s.amps_ = std::move(amplitudes);
  return s;
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

GateMatrix gate_matrix(GateKind kind, double angle) {
  using namespace std::complex_literals;
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const double r = std::numbers::sqrt2 / 2;
  GateMatrix m;
  m.dim = arity(kind) == 1 ? 2 : 4;
  auto set2 = [&](Amplitude a, Amplitude b, Amplitude d, Amplitude e) {
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = d;
    m.at(1, 1) = e;
  };
  switch (kind) {
    case GateKind::kH: set2(r, r, r, -r); break;
    case GateKind::kX: set2(0, 1, 1, 0); break;
    case GateKind::kY: set2(0, -1i, 1i, 0); break;
    case GateKind::kZ: set2(1, 0, 0, -1); break;
    case GateKind::kS: set2(1, 0, 0, 1i); break;
    case GateKind::kT: set2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4)); break;
    case GateKind::kP: set2(1, 0, 0, std::polar(1.0, angle)); break;
    case GateKind::kRX: set2(c, -1i * s, -1i * s, c); break;
    case GateKind::kRY: set2(c, -s, s, c); break;
    case GateKind::kRZ:
      set2(std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2));
      break;
    case GateKind::kCX:
      m.at(0, 0) = m.at(1, 1) = m.at(2, 3) = m.at(3, 2) = 1;
      break;
    case GateKind::kCZ:
      m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1;
      m.at(3, 3) = -1;
      break;
    case GateKind::kCP:
      m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1;
      m.at(3, 3) = std::polar(1.0, angle);
      break;
    case GateKind::kCRY:
      m.at(0, 0) = m.at(1, 1) = 1;
      m.at(2, 2) = c;
      m.at(2, 3) = -s;
      m.at(3, 2) = s;
      m.at(3, 3) = c;
      break;
    case GateKind::kSWAP:
      m.at(0, 0) = m.at(1, 2) = m.at(2, 1) = m.at(3, 3) = 1;
      break;
  }
  return m;
}

void apply_matrix(Statevector& state, const GateMatrix& m,
                  std::span<const int> qubits) {
  auto amps = state.mutable_amplitudes();
  const std::size_t dim = amps.size();
  if (m.dim == 2) {
    const std::size_t bit = std::size_t{1} << qubits[0];
    const Amplitude m00 = m.at(0, 0), m01 = m.at(0, 1);
    const Amplitude m10 = m.at(1, 0), m11 = m.at(1, 1);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const Amplitude a0 = amps[i];
      const Amplitude a1 = amps[i | bit];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i | bit] = m10 * a0 + m11 * a1;
    }
    return;
  }
  const std::size_t hi = std::size_t{1} << qubits[0];
  const std::size_t lo = std::size_t{1} << qubits[1];
  std::array<std::size_t, 4> idx;
  std::array<Amplitude, 4> in;
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & hi) || (i & lo)) continue;
    idx = {i, i | lo, i | hi, i | hi | lo};
    for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
    for (int row = 0; row < 4; ++row) {
      Amplitude acc = 0;
      for (int col = 0; col < 4; ++col) acc += m.at(row, col) * in[col];
      amps[idx[row]] = acc;
    }
  }
}

void apply_gate(Statevector& state, const Instruction& instruction) {
  double angle = 0.0;
  if (instruction.angle) {
    auto v = instruction.angle->constant_value();
    if (!v) throw BindError("unbound angle in " + to_string(instruction));
    angle = *v;
  }
  apply_matrix(state, gate_matrix(instruction.kind, angle), instruction.qubits);
}

Statevector run(const Circuit& circuit) {
  Statevector state(circuit.num_qubits());
  for (const auto& inst : circuit.instructions()) apply_gate(state, inst);
  return state;
}

std::vector<double> marginal_probabilities(const Statevector& state,
                                           std::span<const int> measured) {
  std::vector<double> out(std::size_t{1} << measured.size(), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t outcome = 0;
    for (std::size_t k = 0; k < measured.size(); ++k) {
      outcome |= ((i >> measured[k]) & 1) << k;
    }
    out[outcome] += std::norm(amps[i]);
  }
  return out;
}

std::string ShotCounts::bitstring(std::uint64_t outcome) const {
  std::string s(width, '0');
  for (int k = 0; k < width; ++k) {
    if ((outcome >> k) & 1) s[width - 1 - k] = '1';
  }
  return s;
}

std::map<std::string, std::uint64_t> ShotCounts::to_map() const {
  std::map<std::string, std::uint64_t> out;
  for (std::uint64_t o = 0; o < counts.size(); ++o) {
    if (counts[o]) out.emplace(bitstring(o), counts[o]);
  }
  return out;
}

ShotCounts sample_probabilities(std::span<const double> probabilities,
                                int width, std::uint64_t shots,
                                std::uint64_t seed) {
  if (width < 1) throw NoMeasurementError();
  if (shots < 1) throw Error("shots must be >= 1");
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cdf[i] = acc;
    if (probabilities[i] > 0.0) last_nonzero = i;
  }
  ShotCounts out{width, shots, std::vector<std::uint64_t>(probabilities.size(), 0)};
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t o = it == cdf.end() ? last_nonzero
                                    : static_cast<std::size_t>(it - cdf.begin());
    // Rounding can land on a zero-probability cell sharing the cdf value.
    while (probabilities[o] <= 0.0 && o < last_nonzero) ++o;
    ++out.counts[o];
  }
  return out;
}

ShotCounts sample(const Statevector& state, std::span<const int> measured,
                  std::uint64_t shots, std::uint64_t seed) {
  if (measured.empty()) throw NoMeasurementError();
  const auto p = marginal_probabilities(state, measured);
  return sample_probabilities(p, static_cast<int>(measured.size()), shots, seed);
}

int majority_label(const ShotCounts& counts, const Decoder& decoder) {
  const int labels = std::max(decoder.num_classes, 2);
  std::vector<std::uint64_t> votes(labels, 0);
  for (std::uint64_t o = 0; o < counts.counts.size(); ++o) {
    if (counts.counts[o]) votes[decoder.decode(o, counts.width)] += counts.counts[o];
  }
  // max_element returns the first maximum, i.e. the smaller label on ties.
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

int predict_circuit(const Circuit& circuit, const Decoder& decoder,
                    const Bindings& bindings, std::uint64_t shots,
                    std::uint64_t seed) {
  if (circuit.measured_qubits().empty()) throw NoMeasurementError();
  const Statevector state = run(circuit.bind(bindings));
  return majority_label(sample(state, circuit.measured_qubits(), shots, seed), decoder);
}

int predict(const QnnModel& model, std::span<const double> features,
            const Bindings& weights, std::uint64_t shots, std::uint64_t seed) {
  return predict_circuit(model.circuit, model.decoder(),
                         model.bindings(features, weights), shots, seed);
}

std::uint64_t evaluation_seed(std::uint64_t campaign_seed, std::size_t sample_id) {
  return mix_seed(campaign_seed, 0x5eed5a3b1eULL, sample_id);
}

}  // namespace qmut
