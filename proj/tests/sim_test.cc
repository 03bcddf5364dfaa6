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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qmut/error.h"
#include "qmut/random.h"
#include "qmut/zoo.h"
#include "reference_sim.h"
#include "test_util.h"

namespace qmut {
namespace {

constexpr double kPi = std::numbers::pi;
// Upper 1e-6 tail of chi-square with 7 degrees of freedom (scipy
// chi2.isf(1e-6, 7)).
constexpr double kChiSquare7 = 40.521831234179864;

TEST(GateMatrixTest, UnitaryForAllKindsAndAngles) {
  Rng rng(1);
  for (GateKind k : kAllGateKinds) {
    for (int t = 0; t < 100; ++t) {
      const GateMatrix m = gate_matrix(k, rng.uniform(-kPi, kPi));
      for (int r = 0; r < m.dim; ++r) {
        for (int c = 0; c < m.dim; ++c) {
          Amplitude acc = 0.0;
          for (int k2 = 0; k2 < m.dim; ++k2) acc += std::conj(m.at(k2, r)) * m.at(k2, c);
          EXPECT_NEAR(std::abs(acc - Amplitude(r == c ? 1.0 : 0.0)), 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(GateMatrixTest, MatchesTextbookMatrices) {
  Rng rng(2);
  for (GateKind k : kAllGateKinds) {
    const double t = rng.uniform(-kPi, kPi);
    const GateMatrix m = gate_matrix(k, t);
    const auto ref = testing::local_matrix(k, t);
    for (int r = 0; r < m.dim; ++r)
      for (int c = 0; c < m.dim; ++c) EXPECT_NEAR(std::abs(m.at(r, c) - ref[r][c]), 0.0, 1e-14);
  }
}

TEST(ApplyGateTest, HadamardOnZero) {
  Statevector s(1);
  apply_gate(s, make_gate(GateKind::kH, {0}));
  EXPECT_NEAR(s[0].real(), 0.70710678118654752, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.70710678118654752, 1e-15);
}

TEST(ApplyGateTest, RyPiFlipsZeroToOne) {
  Statevector s(1);
  apply_gate(s, make_gate(GateKind::kRY, {0}, ParamExpr::constant(kPi)));
  EXPECT_NEAR(std::abs(s[0] - Amplitude(std::cos(kPi / 2))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - Amplitude(1.0)), 0.0, 1e-15);
}

TEST(ApplyGateTest, CxTruthTable) {
  // |10> with q1 = 1 (basis index 2); CX(q1 -> q0) gives |11>.
  Statevector s(2);
  apply_gate(s, make_gate(GateKind::kX, {1}));
  apply_gate(s, make_gate(GateKind::kCX, {1, 0}));
  EXPECT_NEAR(std::abs(s[3]), 1.0, 1e-15);
}

TEST(ApplyGateTest, UnboundAngleThrows) {
  Statevector s(1);
  EXPECT_THROW(apply_gate(s, make_gate(GateKind::kRY, {0}, ParamExpr::symbol("t"))),
               BindError);
}

TEST(RunTest, BellState) {
  Circuit c(2);
  c.append(make_gate(GateKind::kH, {0}));
  c.append(make_gate(GateKind::kCX, {0, 1}));
  const Statevector s = run(c);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s[0] - r), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s[2]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s[3] - r), 0.0, 1e-12);
}

TEST(RunTest, ZFeatureMapAtZeroIsUniform) {
  const auto fm = build_feature_map(FeatureMapKind::kZ, 3, 3);
  const Statevector s = run(fm.circuit.bind({{"x[0]", 0}, {"x[1]", 0}, {"x[2]", 0}}));
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - Amplitude(1 / std::sqrt(8.0))), 0.0, 1e-12);
  }
}

TEST(RunTest, AgreesWithReferenceSimulator) {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const Circuit c = testing::random_circuit(rng, 1 + rng.below(5), rng.below(25));
    const auto ref = testing::reference_run(c);
    const Statevector s = run(c);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(std::abs(s[i] - ref[i]), 0.0, 1e-12);
  }
}

TEST(RunTest, NormPreservedAfterEveryInstruction) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const Circuit c = testing::random_circuit(rng, 1 + rng.below(6), rng.below(31));
    Statevector s(c.num_qubits());
    for (const auto& inst : c.instructions()) {
      apply_gate(s, inst);
      ASSERT_NEAR(s.norm(), 1.0, 1e-10);
    }
  }
}

TEST(RunTest, CanonicalReorderingGivesSameState) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Circuit c = testing::random_circuit(rng, 4, 20);
    std::vector<Instruction> reordered;
    for (const auto& slice : moments(c)) {
      for (auto it = slice.rbegin(); it != slice.rend(); ++it) reordered.push_back(c.instruction(*it));
    }
    const Statevector a = run(c);
    const Statevector b = run(Circuit(c.num_qubits(), reordered));
    for (std::size_t i = 0; i < a.dimension(); ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-12);
  }
}

TEST(SampleTest, DeterministicOutcome) {
  Circuit c(2);
  c.append(make_gate(GateKind::kX, {0}));
  c.append(make_gate(GateKind::kX, {1}));
  const std::vector<int> measured = {0, 1};
  const auto counts = sample(run(c), measured, 1000, 9);
  EXPECT_EQ(counts.to_map(), (std::map<std::string, std::uint64_t>{{"11", 1000}}));
}

TEST(SampleTest, BitstringPutsHighestQubitLeft) {
  Circuit c(3);
  c.append(make_gate(GateKind::kX, {2}));
  const std::vector<int> measured = {0, 2};
  const auto counts = sample(run(c), measured, 10, 1);
  EXPECT_EQ(counts.to_map(), (std::map<std::string, std::uint64_t>{{"10", 10}}));
}

TEST(SampleTest, BellCountsWithinSixSigma) {
  Circuit c(2);
  c.append(make_gate(GateKind::kH, {0}));
  c.append(make_gate(GateKind::kCX, {0, 1}));
  const std::vector<int> measured = {0, 1};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto counts = sample(run(c), measured, 10000, seed);
    EXPECT_EQ(counts.counts[1] + counts.counts[2], 0u);
    EXPECT_LE(std::abs(static_cast<double>(counts.counts[0]) - 5000.0), 300.0);
    EXPECT_EQ(counts.counts[0] + counts.counts[3], 10000u);
  }
}

TEST(SampleTest, SameSeedSameCounts) {
  Rng rng(6);
  const Circuit c = testing::random_circuit(rng, 3, 10);
  const auto a = sample(run(c), c.measured_qubits(), 1000, 42);
  const auto b = sample(run(c), c.measured_qubits(), 1000, 42);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(SampleTest, EmptyMeasuredSetThrows) {
  EXPECT_THROW(sample(Statevector(1), {}, 10, 0), NoMeasurementError);
}

TEST(SampleTest, ChiSquareOnRandomStates) {
  Rng rng(7);
  const std::vector<int> measured = {0, 1, 2};
  for (int t = 0; t < 50; ++t) {
    const Circuit c = testing::random_circuit(rng, 3, 12);
    const auto probs = marginal_probabilities(run(c), measured);
    const auto counts = sample(run(c), measured, 10000, rng.next());
    double chi = 0.0;
    int cells = 0;
    for (std::size_t o = 0; o < probs.size(); ++o) {
      const double expected = probs[o] * 10000.0;
      if (expected < 1e-9) {
        EXPECT_EQ(counts.counts[o], 0u);
        continue;
      }
      const double d = static_cast<double>(counts.counts[o]) - expected;
      chi += d * d / expected;
      ++cells;
    }
    // Fewer cells only lowers the degrees of freedom; 7 stays conservative.
    EXPECT_GT(cells, 0);
    EXPECT_LT(chi, kChiSquare7);
  }
}

TEST(MarginalTest, MatchesReference) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const Circuit c = testing::random_circuit(rng, 4, 15);
    std::vector<int> measured;
    for (int q = 0; q < 4; ++q)
      if (rng.below(2)) measured.push_back(q);
    if (measured.empty()) measured.push_back(1);
    const auto ours = marginal_probabilities(run(c), measured);
    const auto ref = testing::reference_marginals(testing::reference_run(c), measured);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ours[i], ref[i], 1e-12);
  }
}

TEST(DecoderTest, SingleQubitParityAndModulo) {
  EXPECT_EQ((Decoder{2}.decode(1, 1)), 1);
  EXPECT_EQ((Decoder{3}.decode(2, 2)), 2);
  EXPECT_EQ((Decoder{3}.decode(3, 2)), 0);
}

TEST(MajorityTest, TieGoesToSmallerLabel) {
  ShotCounts counts{1, 1000, {500, 500}};
  EXPECT_EQ(majority_label(counts, Decoder{2}), 0);
}

TEST(PredictTest, OneMeasuredQubitInStateOne) {
  Circuit c(3);
  c.append(make_gate(GateKind::kX, {2}));
  c.measure(2);
  EXPECT_EQ(predict_circuit(c, Decoder{2}, {}, 100, 0), 1);
}

TEST(PredictTest, DeterministicInSeed) {
  ModelSpec spec;
  spec.num_features = 3;
  const QnnModel m = build_model(spec);
  Rng rng(9);
  Bindings w;
  for (const auto& s : m.weight_symbols) w.emplace(s, rng.uniform(-kPi, kPi));
  const std::vector<double> x = {0.3, 1.2, 2.5};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(predict(m, x, w, 1000, seed), predict(m, x, w, 1000, seed));
  }
}

TEST(PredictTest, NoMeasurementThrows) {
  Circuit c(1);
  EXPECT_THROW(predict_circuit(c, Decoder{2}, {}, 10, 0), NoMeasurementError);
}

}  // namespace
}  // namespace qmut
