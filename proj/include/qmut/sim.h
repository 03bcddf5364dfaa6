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

#ifndef QMUT_SIM_H_
#define QMUT_SIM_H_

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmut/circuit.h"
#include "qmut/model.h"

namespace qmut {

using Amplitude = std::complex<double>;

/// Dense n-qubit state. Basis index bit k is the value of qubit k.
class Statevector {
 public:
  /// |0...0>.
  explicit Statevector(int num_qubits);
  static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> mutable_amplitudes() { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  std::vector<double> probabilities() const;

 private:
  int num_qubits_;
  std::vector<Amplitude> amps_;
};

/// Row-major unitary of a 1- or 2-qubit gate. For two-qubit gates the local
/// basis index is 2*bit(qubits[0]) + bit(qubits[1]), i.e. the control is the
/// high bit as in the usual textbook matrices.
struct GateMatrix {
  int dim = 2;
  std::array<Amplitude, 16> data{};

  Amplitude& at(int row, int col) { return data[row * dim + col]; }
  const Amplitude& at(int row, int col) const { return data[row * dim + col]; }
};

GateMatrix gate_matrix(GateKind kind, double angle = 0.0);

void apply_matrix(Statevector& state, const GateMatrix& m,
                  std::span<const int> qubits);

/// Applies a bound instruction. Throws BindError if the angle still has
/// symbols.
void apply_gate(Statevector& state, const Instruction& instruction);

/// Runs a fully bound circuit from |0...0>.
Statevector run(const Circuit& circuit);

/// Probability of each measured outcome. Outcome bit k is the value of
/// measured[k].
std::vector<double> marginal_probabilities(const Statevector& state,
                                           std::span<const int> measured);

struct ShotCounts {
  int width = 0;
  std::uint64_t shots = 0;
  /// Dense histogram indexed by outcome, size 2^width.
  std::vector<std::uint64_t> counts;

  /// Outcome as a bitstring, highest measured qubit leftmost.
  std::string bitstring(std::uint64_t outcome) const;
  std::map<std::string, std::uint64_t> to_map() const;
};

ShotCounts sample_probabilities(std::span<const double> probabilities,
                                int width, std::uint64_t shots,
                                std::uint64_t seed);

/// Multinomial draw over the measured qubits. Throws NoMeasurementError on
/// an empty measured set.
ShotCounts sample(const Statevector& state, std::span<const int> measured,
                  std::uint64_t shots, std::uint64_t seed);

/// Most frequent decoded label; ties go to the smaller label.
int majority_label(const ShotCounts& counts, const Decoder& decoder);

/// bind -> run -> sample -> decode for an arbitrary circuit.
int predict_circuit(const Circuit& circuit, const Decoder& decoder,
                    const Bindings& bindings, std::uint64_t shots,
                    std::uint64_t seed);

int predict(const QnnModel& model, std::span<const double> features,
            const Bindings& weights, std::uint64_t shots, std::uint64_t seed);

/// Per-evaluation seed for one test sample under a campaign seed.
std::uint64_t evaluation_seed(std::uint64_t campaign_seed, std::size_t sample_id);

inline constexpr std::uint64_t kDefaultShots = 1000;

}  // namespace qmut

#endif  // QMUT_SIM_H_
