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

#include "qmut/qasm.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qmut/error.h"
#include "qmut/random.h"
#include "qmut/zoo.h"
#include "test_util.h"

namespace qmut {
namespace {

constexpr double kPi = std::numbers::pi;

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

TEST(QasmEmitTest, BellCircuit) {
  Circuit c(2);
  c.append(make_gate(GateKind::kH, {0}));
  c.append(make_gate(GateKind::kCX, {0, 1}));
  c.measure(0);
  c.measure(1);
  const std::string text = emit_qasm(c);
  EXPECT_TRUE(text.starts_with("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n"));
  EXPECT_TRUE(contains(text, "qubit[2] q;\n"));
  EXPECT_TRUE(contains(text, "bit[2] c;\n"));
  EXPECT_TRUE(contains(text, "h q[0];\n"));
  EXPECT_TRUE(contains(text, "cx q[0], q[1];\n"));
  EXPECT_TRUE(contains(text, "c[0] = measure q[0];\n"));
  EXPECT_TRUE(contains(text, "c[1] = measure q[1];\n"));
  EXPECT_LT(text.find("cx"), text.find("measure"));
}

TEST(QasmEmitTest, AnglePrinting) {
  Circuit c(1);
  c.append(make_gate(GateKind::kRY, {0}, ParamExpr::constant(kPi / 2)));
  EXPECT_TRUE(contains(emit_qasm(c), "ry(1.5707963267948966) q[0];\n"));
}

TEST(QasmEmitTest, EmptyCircuitHasOnlyHeader) {
  EXPECT_EQ(emit_qasm(Circuit(1)),
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[1] q;\n");
}

TEST(QasmEmitTest, UnboundAngleThrows) {
  Circuit c(1);
  c.append(make_gate(GateKind::kRY, {0}, ParamExpr::symbol("t")));
  EXPECT_THROW(emit_qasm(c), BindError);
}

TEST(QasmParseTest, PiExpressions) {
  const Circuit c = parse_qasm("OPENQASM 3.0;\nqubit[2] q;\nry(pi/2) q[0];\n"
                               "rz(-3*pi/4) q[1];\ncp(2*(pi - 1)) q[0], q[1];\n");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(*c.instruction(0).angle->constant_value(), kPi / 2);
  EXPECT_DOUBLE_EQ(*c.instruction(1).angle->constant_value(), -3 * kPi / 4);
  EXPECT_DOUBLE_EQ(*c.instruction(2).angle->constant_value(), 2 * (kPi - 1));
}

TEST(QasmParseTest, Version2Declarations) {
  const Circuit c = parse_qasm(
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[1];\n"
      "// comment\nh q[2]; /* block */\nmeasure q[2] -> c[0];\n");
  EXPECT_EQ(c.num_qubits(), 3);
  EXPECT_EQ(c.measured_qubits(), (std::vector<int>{2}));
}

TEST(QasmParseTest, UnsupportedGate) {
  try {
    parse_qasm("OPENQASM 3.0;\nqubit[1] q;\nfoo q[0];\n");
    FAIL();
  } catch (const QasmError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 1);
    EXPECT_TRUE(contains(e.what(), "foo"));
  }
}

TEST(QasmParseTest, Errors) {
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[1] q;\nh q[1];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\ncx q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\nry q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\nh(1) q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\ncx q[1], q[1];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\nh q[0]\n"), QasmError);
  EXPECT_THROW(parse_qasm("qubit[2] q;\nh q[0];\n"), QasmError);
}

TEST(QasmRoundTripTest, RandomBoundCircuits) {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const Circuit c = testing::random_circuit(rng, 1 + rng.below(6), rng.below(25), false,
                                              rng.below(2) == 0);
    const std::string text = emit_qasm(c);
    const Circuit back = parse_qasm(text);
    ASSERT_EQ(canonical_form(back), canonical_form(c)) << text;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c.instruction(i).angle) continue;
      EXPECT_EQ(*back.instruction(i).angle->constant_value(),
                *c.instruction(i).angle->constant_value());
    }
    EXPECT_EQ(emit_qasm(back), text);
  }
}

TEST(QasmRoundTripTest, BoundModels) {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    ModelSpec spec;
    spec.feature_map = rng.below(2) ? FeatureMapKind::kZ : FeatureMapKind::kZZ;
    spec.ansatz = rng.below(2) ? AnsatzKind::kRealAmplitudes : AnsatzKind::kEfficientSU2;
    spec.num_features = 2 + static_cast<int>(rng.below(5));
    spec.ansatz_reps = 1 + static_cast<int>(rng.below(3));
    const QnnModel m = build_model(spec);
    std::vector<double> x(spec.num_features);
    for (double& v : x) v = rng.uniform(0, kPi);
    Bindings w;
    for (const auto& s : m.weight_symbols) w.emplace(s, rng.uniform(-kPi, kPi));
    const Circuit bound = m.circuit.bind(m.bindings(x, w));
    EXPECT_EQ(canonical_form(parse_qasm(emit_qasm(bound))), canonical_form(bound));
  }
}

}  // namespace
}  // namespace qmut
