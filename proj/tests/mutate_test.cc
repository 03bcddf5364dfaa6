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

#include "qmut/mutate.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qmut/error.h"
#include "qmut/random.h"
#include "qmut/sim.h"
#include "qmut/zoo.h"

namespace qmut {
namespace {

constexpr double kPi = std::numbers::pi;

QnnModel angle_model(AnsatzKind ansatz, int n, int reps,
                     FeatureMapKind fm = FeatureMapKind::kZ) {
  ModelSpec spec;
  spec.feature_map = fm;
  spec.ansatz = ansatz;
  spec.ansatz_reps = reps;
  spec.num_features = n;
  return build_model(spec);
}

QnnModel raw_model(const Circuit& c) {
  QnnModel m;
  m.circuit = c;
  return m;
}

Bindings random_weights(const QnnModel& m, std::uint64_t seed) {
  Rng rng(seed);
  Bindings w;
  for (const auto& s : m.weight_symbols) w.emplace(s, rng.uniform(-kPi, kPi));
  return w;
}

std::size_t count(OperatorKind k, const QnnModel& m, const FeatureShape& shape = {}) {
  return generate(k, m, shape, MutationConfig{}).mutants.size();
}

TEST(OperatorNamesTest, ParseGroupsAndAliases) {
  EXPECT_EQ(parse_operators("directed").size(), 7u);
  EXPECT_EQ(parse_operators("baseline").size(), 5u);
  EXPECT_EQ(parse_operators("all").size(), 12u);
  EXPECT_EQ(parse_operators("apc"), (std::vector<OperatorKind>{OperatorKind::kApc}));
  EXPECT_EQ(parse_operators("MeasRemove"),
            (std::vector<OperatorKind>{OperatorKind::kMeasRemove}));
  EXPECT_THROW(parse_operators("nope"), ConfigError);
}

TEST(CountsTest, MatchEnumerationOracle) {
  std::ifstream in(QMUT_SOURCE_DIR "/tests/data/operator_counts.json");
  ASSERT_TRUE(in) << "missing frozen operator counts";
  const auto doc = nlohmann::json::parse(in);
  const std::map<std::string, OperatorKind> ops = {
      {"APC", OperatorKind::kApc}, {"APGC", OperatorKind::kApgc}, {"LS", OperatorKind::kLs},
      {"ILS", OperatorKind::kIls}, {"ALA", OperatorKind::kAla},   {"ALD", OperatorKind::kAld}};
  int checked = 0;
  for (const auto& rec : doc.at("directed")) {
    const int n = rec.at("qubits");
    const int reps = rec.at("reps");
    const AnsatzKind kind = parse_ansatz_kind(rec.at("ansatz").get<std::string>());
    const QnnModel m = angle_model(kind, n, reps);
    for (const auto& [name, op] : ops) {
      EXPECT_EQ(count(op, m), rec.at("counts").at(name).get<std::size_t>())
          << name << " on " << rec.at("ansatz") << "(" << n << ", " << reps << ")";
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
  for (const auto& [features, expected] : doc.at("dfc_tabular").items()) {
    const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, std::stoi(features), 1);
    EXPECT_EQ(count(OperatorKind::kDfc, m), expected.get<std::size_t>());
  }
}

TEST(CountsTest, ClosedForms) {
  for (int n : {2, 3, 5, 8}) {
    for (int r = 1; r <= 3; ++r) {
      const QnnModel ra = angle_model(AnsatzKind::kRealAmplitudes, n, r);
      const QnnModel su = angle_model(AnsatzKind::kEfficientSU2, n, r);
      const std::size_t L = r + 1;
      EXPECT_EQ(count(OperatorKind::kApc, ra), 8 * L);
      EXPECT_EQ(count(OperatorKind::kApgc, ra), n * L);
      EXPECT_EQ(count(OperatorKind::kApgc, su), 3 * n * L);
      EXPECT_EQ(count(OperatorKind::kLs, ra), L * (L - 1) / 2);
      EXPECT_EQ(count(OperatorKind::kIls, ra), static_cast<std::size_t>(r));
      EXPECT_EQ(count(OperatorKind::kIls, su), static_cast<std::size_t>(2 * r + 1));
      EXPECT_EQ(count(OperatorKind::kAla, ra), 2 * L);
      EXPECT_EQ(count(OperatorKind::kAld, ra), static_cast<std::size_t>(3 * r + 2));
    }
  }
}

TEST(CountsTest, QcnnLayerSwaps) {
  const QnnModel m = angle_model(AnsatzKind::kQcnn, 8, 1);
  EXPECT_EQ(m.layers.size(), 6u);
  EXPECT_EQ(count(OperatorKind::kLs, m), 15u);
}

TEST(CountsTest, ImageDfc) {
  ModelSpec spec;
  spec.feature_map = FeatureMapKind::kAmplitude;
  spec.ansatz = AnsatzKind::kQcnn;
  spec.num_features = 16;
  spec.num_qubits = 4;
  const QnnModel m = build_model(spec);
  EXPECT_EQ(count(OperatorKind::kDfc, m, FeatureShape::image_of(4, 4)), 6u);
}

TEST(ApcTest, ZeroTouchesOnlyItsLayer) {
  const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, 4, 2);
  const Circuit z = apply_apc(m.circuit, 0, ApcChange{ApcChange::Kind::kZero});
  const Bindings w = random_weights(m, 1);
  Bindings b = w;
  for (int i = 0; i < 4; ++i) b.emplace("x[" + std::to_string(i) + "]", 0.3);
  const Circuit orig_bound = m.circuit.bind(b);
  const Circuit bound = z.bind(b);
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const auto* tag = bound.instruction(i).ansatz_tag();
    if (tag && tag->layer == 0 && bound.instruction(i).angle) {
      EXPECT_EQ(*bound.instruction(i).angle->constant_value(), 0.0);
    } else {
      EXPECT_EQ(to_string(bound.instruction(i)), to_string(orig_bound.instruction(i)));
    }
  }
}

TEST(ApcTest, DirectedValues) {
  const ParamExpr w = ParamExpr::symbol("w[0]");
  const Bindings b{{"w[0]", 0.7}};
  EXPECT_EQ((ApcChange{ApcChange::Kind::kAdd, kPi / 2}.apply(w).evaluate(b)), 0.7 + kPi / 2);
  EXPECT_EQ((ApcChange{ApcChange::Kind::kScale, 2.0}.apply(w).evaluate(b)), 1.4);
  EXPECT_EQ((ApcChange{ApcChange::Kind::kSignFlip}.apply(w).evaluate(b)), -0.7);
}

TEST(InvolutionTest, SignFlipTwice) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto kind = rng.below(2) ? AnsatzKind::kRealAmplitudes : AnsatzKind::kEfficientSU2;
    const QnnModel m = angle_model(kind, 2 + rng.below(5), 1 + rng.below(3));
    const int layer = static_cast<int>(rng.below(m.layers.size()));
    const ApcChange flip{ApcChange::Kind::kSignFlip};
    EXPECT_EQ(apply_apc(apply_apc(m.circuit, layer, flip), layer, flip), m.circuit);
  }
}

TEST(InvolutionTest, LayerSwapTwice) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const QnnModel m = angle_model(AnsatzKind::kEfficientSU2, 2 + rng.below(5), 1 + rng.below(3));
    const int i = static_cast<int>(rng.below(m.layers.size()));
    int j;
    do j = static_cast<int>(rng.below(m.layers.size()));
    while (j == i);
    EXPECT_EQ(swap_layers(swap_layers(m.circuit, i, j), i, j), m.circuit);
    EXPECT_NE(canonical_form(swap_layers(m.circuit, i, j)), canonical_form(m.circuit));
  }
}

TEST(InvolutionTest, ImageFlipsAndRotations) {
  Rng rng(4);
  std::vector<double> img(5 * 7);
  for (double& v : img) v = rng.uniform();
  for (ImageOp op : {ImageOp::kFlipH, ImageOp::kFlipV}) {
    EXPECT_EQ(apply_image_op(apply_image_op(img, 5, 7, op), 5, 7, op), img);
  }
  std::vector<double> sq(6 * 6);
  for (double& v : sq) v = rng.uniform();
  EXPECT_EQ(apply_image_op(apply_image_op(sq, 6, 6, ImageOp::kRot90), 6, 6, ImageOp::kRot270), sq);
  EXPECT_EQ(apply_image_op(apply_image_op(sq, 6, 6, ImageOp::kRot180), 6, 6, ImageOp::kRot180), sq);
  // Row 0 reversed by the horizontal flip.
  EXPECT_EQ(apply_image_op(img, 5, 7, ImageOp::kFlipH)[0], img[6]);
}

TEST(ImageOpTest, CropZeroesBorder) {
  const std::vector<double> img(8 * 8, 1.0);
  const auto out = apply_image_op(img, 8, 8, ImageOp::kCrop);
  // Central 3/4 of 8 is 6 pixels: one-pixel border cleared.
  double sum = 0;
  for (double v : out) sum += v;
  EXPECT_EQ(sum, 36.0);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[9], 1.0);
}

TEST(InvolutionTest, OneMinusOnScaledFeatures) {
  const Dataset d = scale_features(synth_blobs(50, 4, 2, 5.0, 8), 0.0, kPi);
  const FeatureOp op{FeatureOp::Kind::kOneMinus};
  for (double x : d.samples.data) EXPECT_EQ(op.apply(op.apply(x)), x);
  EXPECT_EQ(op.apply(0.25), 0.75);
}

TEST(DfcTest, PairTransformTouchesOnlyItsPair) {
  const InputTransform t{InputTransform::Pair{1, 2, FeatureOp{FeatureOp::Kind::kAdd, kPi},
                                              FeatureOp{FeatureOp::Kind::kMul, 0.5}}};
  const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(t.apply(x), (std::vector<double>{0.1, 0.2 + kPi, 0.15, 0.4}));
}

TEST(ApgcTest, KeepsAngleExpression) {
  const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, 4, 1);
  const auto g = gen_apgc(m, {});
  ASSERT_EQ(g.mutants.size(), 8u);
  for (const auto& mut : g.mutants) {
    const auto& d = std::get<ApgcDescriptor>(mut.descriptor);
    EXPECT_EQ(d.from, GateKind::kRY);
    EXPECT_EQ(d.to, GateKind::kRZ);
    const auto& changed = mut.circuit()->instruction(d.gate);
    EXPECT_EQ(changed.kind, GateKind::kRZ);
    EXPECT_EQ(changed.angle->to_string(), m.circuit.instruction(d.gate).angle->to_string());
  }
  Circuit rz(1);
  rz.append(make_gate(GateKind::kRZ, {0}, ParamExpr::constant(0.3), AnsatzTag{0, 0, BlockRole::kRotation}));
  rz.measure(0);
  EXPECT_EQ(gen_apgc(raw_model(rz), {}).mutants.size(), 2u);
}

TEST(IlsTest, EntangleBeforeRotation) {
  const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, 3, 1);
  const auto g = gen_ils(m, {});
  ASSERT_EQ(g.mutants.size(), 1u);
  const Circuit& c = *g.mutants[0].circuit();
  std::vector<GateKind> layer0;
  for (const auto& inst : c.instructions()) {
    if (inst.ansatz_tag() && inst.ansatz_tag()->layer == 0) layer0.push_back(inst.kind);
  }
  EXPECT_EQ(layer0, (std::vector<GateKind>{GateKind::kCX, GateKind::kCX, GateKind::kRY,
                                           GateKind::kRY, GateKind::kRY}));
  EXPECT_FALSE(g.notes.empty());  // final single-block layer skipped
}

TEST(AlaTest, CopyAndRandomVariants) {
  const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, 3, 1);
  MutationConfig cfg;
  cfg.seed = 5;
  const auto g = gen_ala(m, cfg);
  ASSERT_EQ(g.mutants.size(), 4u);
  const Bindings w = random_weights(m, 6);
  const std::vector<double> x = {0.1, 0.2, 0.3};
  for (const auto& mut : g.mutants) {
    EXPECT_FALSE(mut.incompetent());
    Bindings b = m.bindings(x, w);
    b.insert(mut.extra_bindings.begin(), mut.extra_bindings.end());
    EXPECT_NO_THROW(mut.circuit()->bind(b));
    const auto& d = std::get<AlaDescriptor>(mut.descriptor);
    // Angles of the inserted layer (tagged with the new index).
    std::vector<double> inserted, source;
    const Circuit bound = mut.circuit()->bind(b);
    for (const auto& inst : bound.instructions()) {
      const auto* tag = inst.ansatz_tag();
      if (!tag || !inst.angle) continue;
      if (tag->layer == 2) inserted.push_back(*inst.angle->constant_value());
      if (tag->layer == d.after_layer) source.push_back(*inst.angle->constant_value());
    }
    ASSERT_EQ(inserted.size(), source.size());
    if (d.init == AlaInit::kCopy) {
      EXPECT_EQ(inserted, source);
      EXPECT_TRUE(mut.extra_bindings.empty());
    } else {
      EXPECT_EQ(mut.extra_bindings.size(), source.size());
      for (double v : inserted) {
        EXPECT_GE(v, -kPi);
        EXPECT_LE(v, kPi);
      }
    }
  }
}

TEST(AldTest, TargetsAndValidity) {
  const QnnModel m = angle_model(AnsatzKind::kRealAmplitudes, 3, 1);
  const auto g = gen_ald(m, {});
  ASSERT_EQ(g.mutants.size(), 5u);
  for (const auto& mut : g.mutants) {
    const auto& d = std::get<AldDescriptor>(mut.descriptor);
    EXPECT_FALSE(mut.incompetent());
    int kept_cx = 0, kept_rot = 0;
    for (const auto& inst : mut.circuit()->instructions()) {
      const auto* tag = inst.ansatz_tag();
      if (!tag || tag->layer != d.layer) continue;
      (inst.kind == GateKind::kCX ? kept_cx : kept_rot)++;
    }
    switch (d.target) {
      case AldTarget::kEntanglersOnly: EXPECT_EQ(kept_cx, 0); break;
      case AldTarget::kRotationsOnly: EXPECT_EQ(kept_rot, 0); break;
      case AldTarget::kFull: EXPECT_EQ(kept_cx + kept_rot, 0); break;
    }
  }
}

TEST(BaselineTest, GateAddMatchesBruteForce) {
  Circuit c(2);
  c.append(make_gate(GateKind::kH, {0}));
  c.append(make_gate(GateKind::kCX, {0, 1}));
  c.append(make_gate(GateKind::kX, {1}));
  c.measure(0);
  c.measure(1);
  MutationConfig cfg;
  cfg.gate_set = {GateKind::kH, GateKind::kX, GateKind::kCX};
  const auto g = gen_gate_add(raw_model(c), cfg);
  // Brute force: every slot, every kind, every qubit ordering.
  std::set<std::string> expected;
  for (std::size_t pos = 0; pos <= 3; ++pos) {
    for (int q = 0; q < 2; ++q) {
      expected.insert(fmt::format("{}:h:{}", pos, q));
      expected.insert(fmt::format("{}:x:{}", pos, q));
    }
    expected.insert(fmt::format("{}:cx:0,1", pos));
    expected.insert(fmt::format("{}:cx:1,0", pos));
  }
  std::set<std::string> got;
  for (const auto& mut : g.mutants) {
    const auto& d = std::get<GateAddDescriptor>(mut.descriptor);
    std::string qs = fmt::format("{}", d.qubits[0]);
    if (d.qubits.size() == 2) qs += fmt::format(",{}", d.qubits[1]);
    got.insert(fmt::format("{}:{}:{}", d.position, d.kind == GateKind::kH   ? "h"
                                                   : d.kind == GateKind::kX ? "x"
                                                                            : "cx",
                           qs));
    EXPECT_EQ(mut.circuit()->size(), 4u);
    EXPECT_EQ(mut.circuit()->instruction(d.position).kind, d.kind);
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(g.mutants.size(), 24u);
}

TEST(BaselineTest, RemoveAndReplace) {
  Circuit c(3);
  c.append(make_gate(GateKind::kH, {0}));
  c.append(make_gate(GateKind::kCX, {1, 2}));
  c.append(make_gate(GateKind::kRY, {2}, ParamExpr::constant(0.3)));
  c.measure(2);
  const auto removed = gen_gate_remove(raw_model(c), {});
  ASSERT_EQ(removed.mutants.size(), 3u);
  const Circuit& no_cx = *removed.mutants[1].circuit();
  EXPECT_EQ(no_cx.size(), 2u);
  for (const auto& inst : no_cx.instructions()) EXPECT_NE(inst.kind, GateKind::kCX);

  for (const auto& mut : gen_gate_replace(raw_model(c), {}).mutants) {
    const auto& d = std::get<GateReplaceDescriptor>(mut.descriptor);
    EXPECT_EQ(arity(d.from), arity(d.to));
    EXPECT_EQ(is_parameterized(d.from), is_parameterized(d.to));
    EXPECT_NE(d.from, d.to);
    if (d.gate == 2) {
      EXPECT_EQ(*mut.circuit()->instruction(2).angle->constant_value(), 0.3);
    }
  }
}

TEST(BaselineTest, MeasurementOperatorsOnQcnn) {
  const QnnModel m = angle_model(AnsatzKind::kQcnn, 8, 1);
  const auto add = gen_meas_add(m, {});
  const auto rem = gen_meas_remove(m, {});
  EXPECT_EQ(add.mutants.size(), 7u);
  ASSERT_EQ(rem.mutants.size(), 1u);
  EXPECT_TRUE(rem.mutants[0].incompetent());
  for (const auto& mut : add.mutants) {
    EXPECT_EQ(mut.circuit()->measured_qubits().size(), 2u);
    EXPECT_FALSE(mut.incompetent());
  }
  EXPECT_EQ(gen_meas_add(angle_model(AnsatzKind::kRealAmplitudes, 4, 1), {}).mutants.size(), 0u);
}

TEST(GenerateTest, DeterministicWithIds) {
  const QnnModel m = angle_model(AnsatzKind::kEfficientSU2, 3, 2, FeatureMapKind::kZZ);
  MutationConfig cfg;
  cfg.seed = 11;
  for (OperatorKind k : parse_operators("all")) {
    const auto a = generate(k, m, {}, cfg);
    const auto b = generate(k, m, {}, cfg);
    ASSERT_EQ(a.mutants.size(), b.mutants.size());
    for (std::size_t i = 0; i < a.mutants.size(); ++i) {
      EXPECT_EQ(a.mutants[i].id, b.mutants[i].id);
      EXPECT_EQ(to_json(a.mutants[i].descriptor), to_json(b.mutants[i].descriptor));
      EXPECT_EQ(a.mutants[i].extra_bindings, b.mutants[i].extra_bindings);
      if (a.mutants[i].circuit()) {
        EXPECT_EQ(*a.mutants[i].circuit(), *b.mutants[i].circuit());
      }
      EXPECT_EQ(a.mutants[i].source_fingerprint, m.fingerprint());
    }
    if (!a.mutants.empty()) {
      std::string prefix(operator_name(k));
      std::transform(prefix.begin(), prefix.end(), prefix.begin(), ::tolower);
      EXPECT_EQ(a.mutants[0].id, prefix + "_0000");
    }
  }
}

TEST(GenerateTest, DirectedIsFarSmallerThanBaseline) {
  const QnnModel m = angle_model(AnsatzKind::kEfficientSU2, 8, 2);
  std::size_t directed = 0, baseline = 0;
  for (OperatorKind k : kDirectedOperators) directed += count(k, m);
  for (OperatorKind k : kBaselineOperators) baseline += count(k, m);
  EXPECT_LE(directed * 5, baseline);
}

}  // namespace
}  // namespace qmut
