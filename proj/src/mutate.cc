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
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qmut/error.h"
#include "qmut/random.h"

namespace qmut {

namespace {

constexpr double kPi = std::numbers::pi;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool in_layer(const Instruction& inst, int layer) {
  const AnsatzTag* tag = inst.ansatz_tag();
  return tag && tag->layer == layer;
}

Circuit with_instructions(const Circuit& base, std::vector<Instruction> insts) {
  return Circuit(base.num_qubits(), std::move(insts), base.measured_qubits());
}

int layer_count(const Circuit& circuit) {
  int count = 0;
  for (const auto& inst : circuit.instructions()) {
    if (const AnsatzTag* tag = inst.ansatz_tag()) count = std::max(count, tag->layer + 1);
  }
  return count;
}

class Collector {
 public:
  Collector(const QnnModel& model, Generation& out)
      : fingerprint_(model.fingerprint()), original_(model.circuit), out_(out) {}

  // Builds the mutant circuit lazily so validation failures become
  // incompetent mutants instead of aborting the whole operator.
  template <typename Build>
  void add(Descriptor descriptor, Build&& build, Bindings extra = {}) {
    Mutant m;
    m.descriptor = std::move(descriptor);
    m.source_fingerprint = fingerprint_;
    m.extra_bindings = std::move(extra);
    try {
      m.payload = build();
    } catch (const CircuitError& e) {
      m.payload = original_;
      m.incompetent_reason = e.what();
    }
    if (const Circuit* c = m.circuit(); c && c->measured_qubits().empty()) {
      m.incompetent_reason = "no measurement";
    }
    out_.mutants.push_back(std::move(m));
  }

  void add_transform(InputTransform t) {
    Mutant m;
    m.descriptor = DfcDescriptor{t};
    m.payload = std::move(t);
    m.source_fingerprint = fingerprint_;
    out_.mutants.push_back(std::move(m));
  }

  void note(std::string text) { out_.notes.push_back(std::move(text)); }

 private:
  std::string fingerprint_;
  const Circuit& original_;
  Generation& out_;
};

}  // namespace

std::string_view operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kApc: return "APC";
    case OperatorKind::kDfc: return "DFC";
    case OperatorKind::kApgc: return "APGC";
    case OperatorKind::kLs: return "LS";
    case OperatorKind::kIls: return "ILS";
    case OperatorKind::kAla: return "ALA";
    case OperatorKind::kAld: return "ALD";
    case OperatorKind::kGateAdd: return "Add";
    case OperatorKind::kGateRemove: return "Delete";
    case OperatorKind::kGateReplace: return "Change";
    case OperatorKind::kMeasAdd: return "MeasAdd";
    case OperatorKind::kMeasRemove: return "MeasRemove";
  }
  return "?";
}

std::vector<OperatorKind> parse_operators(std::string_view name) {
  const std::string n = lower(name);
  if (n == "directed") return {kDirectedOperators.begin(), kDirectedOperators.end()};
  if (n == "baseline") return {kBaselineOperators.begin(), kBaselineOperators.end()};
  if (n == "all") {
    std::vector<OperatorKind> out(kDirectedOperators.begin(), kDirectedOperators.end());
    out.insert(out.end(), kBaselineOperators.begin(), kBaselineOperators.end());
    return out;
  }
  static const std::map<std::string, OperatorKind> aliases = {
      {"gateadd", OperatorKind::kGateAdd},       {"gateremove", OperatorKind::kGateRemove},
      {"remove", OperatorKind::kGateRemove},     {"gatereplace", OperatorKind::kGateReplace},
      {"replace", OperatorKind::kGateReplace},
  };
  if (auto it = aliases.find(n); it != aliases.end()) return {it->second};
  for (auto group : {std::span<const OperatorKind>(kDirectedOperators),
                     std::span<const OperatorKind>(kBaselineOperators)}) {
    for (OperatorKind k : group) {
      if (lower(operator_name(k)) == n) return {k};
    }
  }
  throw ConfigError(fmt::format("unknown mutation operator '{}'", name));
}

bool is_directed(OperatorKind kind) {
  return std::find(kDirectedOperators.begin(), kDirectedOperators.end(), kind) !=
         kDirectedOperators.end();
}

ParamExpr ApcChange::apply(const ParamExpr& angle) const {
  switch (kind) {
    case Kind::kZero: return ParamExpr::constant(0.0);
    case Kind::kSignFlip: return -angle;
    case Kind::kAdd: return angle + ParamExpr::constant(value);
    case Kind::kScale: return ParamExpr::constant(value) * angle;
  }
  return angle;
}

double FeatureOp::apply(double x) const {
  switch (kind) {
    case Kind::kAdd: return x + value;
    case Kind::kMul: return x * value;
    case Kind::kSignFlip: return -x;
    case Kind::kOneMinus: return 1.0 - x;
  }
  return x;
}

std::string FeatureOp::to_string() const {
  switch (kind) {
    case Kind::kAdd: return "add(" + format_angle(value) + ")";
    case Kind::kMul: return "mul(" + format_angle(value) + ")";
    case Kind::kSignFlip: return "signflip";
    case Kind::kOneMinus: return "oneminus";
  }
  return "?";
}

std::string_view to_string(ImageOp op) {
  switch (op) {
    case ImageOp::kCrop: return "crop";
    case ImageOp::kRot90: return "rot90";
    case ImageOp::kRot180: return "rot180";
    case ImageOp::kRot270: return "rot270";
    case ImageOp::kFlipH: return "fliph";
    case ImageOp::kFlipV: return "flipv";
  }
  return "?";
}

std::vector<double> apply_image_op(std::span<const double> image, int height,
                                   int width, ImageOp op) {
  if (image.size() != static_cast<std::size_t>(height) * width) {
    throw DataError("image buffer does not match its shape");
  }
  const bool rotates_axes = op == ImageOp::kRot90 || op == ImageOp::kRot270;
  if (rotates_axes && height != width) {
    throw DataError("quarter-turn rotation needs a square image");
  }
  std::vector<double> out(image.size(), 0.0);
  auto in = [&](int y, int x) { return image[static_cast<std::size_t>(y) * width + x]; };
  if (op == ImageOp::kCrop) {
    const int ch = std::max(1, static_cast<int>(std::lround(0.75 * height)));
    const int cw = std::max(1, static_cast<int>(std::lround(0.75 * width)));
    const int y0 = (height - ch) / 2, x0 = (width - cw) / 2;
    for (int y = y0; y < y0 + ch; ++y)
      for (int x = x0; x < x0 + cw; ++x) out[static_cast<std::size_t>(y) * width + x] = in(y, x);
    return out;
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      switch (op) {
        case ImageOp::kRot90: v = in(height - 1 - x, y); break;
        case ImageOp::kRot180: v = in(height - 1 - y, width - 1 - x); break;
        case ImageOp::kRot270: v = in(x, width - 1 - y); break;
        case ImageOp::kFlipH: v = in(y, width - 1 - x); break;
        case ImageOp::kFlipV: v = in(height - 1 - y, x); break;
        case ImageOp::kCrop: break;
      }
      out[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  return out;
}

std::vector<double> InputTransform::apply(std::span<const double> features) const {
  if (const Pair* p = std::get_if<Pair>(&spec)) {
    std::vector<double> out(features.begin(), features.end());
    if (p->first >= static_cast<int>(out.size()) || p->second >= static_cast<int>(out.size())) {
      throw DataError("input transform refers to a missing feature");
    }
    out[p->first] = p->first_op.apply(out[p->first]);
    out[p->second] = p->second_op.apply(out[p->second]);
    return out;
  }
  const Image& im = std::get<Image>(spec);
  return apply_image_op(features, im.height, im.width, im.op);
}

std::string InputTransform::to_string() const {
  if (const Pair* p = std::get_if<Pair>(&spec)) {
    return fmt::format("x[{}]:{},x[{}]:{}", p->first, p->first_op.to_string(), p->second,
                       p->second_op.to_string());
  }
  return fmt::format("image:{}", qmut::to_string(std::get<Image>(spec).op));
}

OperatorKind operator_of(const Descriptor& d) {
  static constexpr OperatorKind kinds[] = {
      OperatorKind::kApc,        OperatorKind::kDfc,         OperatorKind::kApgc,
      OperatorKind::kLs,         OperatorKind::kIls,         OperatorKind::kAla,
      OperatorKind::kAld,        OperatorKind::kGateAdd,     OperatorKind::kGateRemove,
      OperatorKind::kGateReplace, OperatorKind::kMeasAdd,    OperatorKind::kMeasRemove};
  return kinds[d.index()];
}

namespace {

std::string_view change_name(ApcChange::Kind k) {
  switch (k) {
    case ApcChange::Kind::kZero: return "zero";
    case ApcChange::Kind::kSignFlip: return "signflip";
    case ApcChange::Kind::kAdd: return "add";
    case ApcChange::Kind::kScale: return "scale";
  }
  return "?";
}

std::string_view target_name(AldTarget t) {
  switch (t) {
    case AldTarget::kFull: return "full";
    case AldTarget::kRotationsOnly: return "rotations";
    case AldTarget::kEntanglersOnly: return "entanglers";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const Descriptor& descriptor) {
  nlohmann::json j;
  j["operator"] = std::string(operator_name(operator_of(descriptor)));
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ApcDescriptor>) {
          j["layer"] = d.layer;
          j["change"] = std::string(change_name(d.change.kind));
          if (d.change.kind == ApcChange::Kind::kAdd || d.change.kind == ApcChange::Kind::kScale) {
            j["value"] = d.change.value;
          }
        } else if constexpr (std::is_same_v<T, DfcDescriptor>) {
          j["transform"] = d.transform.to_string();
          if (const auto* p = std::get_if<InputTransform::Pair>(&d.transform.spec)) {
            j["features"] = {p->first, p->second};
            j["ops"] = {p->first_op.to_string(), p->second_op.to_string()};
          } else {
            j["image_op"] = std::string(to_string(std::get<InputTransform::Image>(d.transform.spec).op));
          }
        } else if constexpr (std::is_same_v<T, ApgcDescriptor>) {
          j["gate"] = d.gate;
          j["from"] = std::string(gate_name(d.from));
          j["to"] = std::string(gate_name(d.to));
        } else if constexpr (std::is_same_v<T, LsDescriptor>) {
          j["layers"] = {d.first, d.second};
        } else if constexpr (std::is_same_v<T, IlsDescriptor>) {
          j["layer"] = d.layer;
          j["block_order"] = d.block_order;
        } else if constexpr (std::is_same_v<T, AlaDescriptor>) {
          j["after_layer"] = d.after_layer;
          j["init"] = d.init == AlaInit::kCopy ? "copy" : "random";
          if (d.init == AlaInit::kRandom) j["seed"] = d.seed;
        } else if constexpr (std::is_same_v<T, AldDescriptor>) {
          j["layer"] = d.layer;
          j["target"] = std::string(target_name(d.target));
        } else if constexpr (std::is_same_v<T, GateAddDescriptor>) {
          j["kind"] = std::string(gate_name(d.kind));
          j["qubits"] = d.qubits;
          j["position"] = d.position;
        } else if constexpr (std::is_same_v<T, GateRemoveDescriptor>) {
          j["gate"] = d.gate;
        } else if constexpr (std::is_same_v<T, GateReplaceDescriptor>) {
          j["gate"] = d.gate;
          j["from"] = std::string(gate_name(d.from));
          j["to"] = std::string(gate_name(d.to));
        } else if constexpr (std::is_same_v<T, MeasAddDescriptor> ||
                             std::is_same_v<T, MeasRemoveDescriptor>) {
          j["qubit"] = d.qubit;
        }
      },
      descriptor);
  return j;
}

// --- rewrites --------------------------------------------------------------

Circuit apply_apc(const Circuit& circuit, int layer, const ApcChange& change) {
  std::vector<Instruction> insts(circuit.instructions().begin(), circuit.instructions().end());
  for (auto& inst : insts) {
    const AnsatzTag* tag = inst.ansatz_tag();
    if (!tag || tag->layer != layer || tag->role != BlockRole::kRotation || !inst.angle) {
      continue;
    }
    inst.angle = change.apply(*inst.angle);
  }
  return with_instructions(circuit, std::move(insts));
}

Circuit swap_layers(const Circuit& circuit, int first, int second) {
  std::vector<Instruction> a, b;
  for (const auto& inst : circuit.instructions()) {
    if (in_layer(inst, first)) a.push_back(inst);
    if (in_layer(inst, second)) b.push_back(inst);
  }
  if (a.empty() || b.empty() || first == second) {
    throw CircuitError(fmt::format("cannot swap layers {} and {}", first, second));
  }
  // Whichever layer comes first in program order takes the other's slot.
  std::vector<Instruction> out;
  bool seen_first = false, seen_second = false;
  for (const auto& inst : circuit.instructions()) {
    if (in_layer(inst, first)) {
      if (!seen_first) out.insert(out.end(), b.begin(), b.end());
      seen_first = true;
    } else if (in_layer(inst, second)) {
      if (!seen_second) out.insert(out.end(), a.begin(), a.end());
      seen_second = true;
    } else {
      out.push_back(inst);
    }
  }
  return with_instructions(circuit, std::move(out));
}

Circuit reorder_blocks(const Circuit& circuit, int layer, std::span<const int> block_order) {
  std::map<int, std::vector<Instruction>> blocks;
  for (const auto& inst : circuit.instructions()) {
    if (in_layer(inst, layer)) blocks[inst.ansatz_tag()->block].push_back(inst);
  }
  std::vector<int> sorted(block_order.begin(), block_order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(blocks.size());
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected || blocks.size() != expected.size() ||
      (!blocks.empty() && blocks.rbegin()->first != static_cast<int>(blocks.size()) - 1)) {
    throw CircuitError(fmt::format("block order is not a permutation of layer {}", layer));
  }
  std::vector<Instruction> out;
  bool emitted = false;
  for (const auto& inst : circuit.instructions()) {
    if (!in_layer(inst, layer)) {
      out.push_back(inst);
      continue;
    }
    if (emitted) continue;
    emitted = true;
    for (int b : block_order) out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  }
  return with_instructions(circuit, std::move(out));
}

// --- directed operators ----------------------------------------------------

Generation gen_apc(const QnnModel& model, const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  std::vector<ApcChange> changes = {{ApcChange::Kind::kZero, 0.0},
                                    {ApcChange::Kind::kSignFlip, 0.0}};
  for (double d : config.apc_add) changes.push_back({ApcChange::Kind::kAdd, d});
  for (double s : config.apc_scale) changes.push_back({ApcChange::Kind::kScale, s});
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    bool has_params = false;
    for (const auto& block : model.layers[l].blocks) {
      if (block.role != BlockRole::kRotation) continue;
      for (std::size_t i : block.instructions) {
        const auto& angle = model.circuit.instruction(i).angle;
        has_params = has_params || (angle && angle->has_symbols());
      }
    }
    if (!has_params) {
      c.note(fmt::format("APC: layer {} has no rotation parameters, skipped", l));
      continue;
    }
    for (const auto& ch : changes) {
      const int layer = static_cast<int>(l);
      c.add(ApcDescriptor{layer, ch},
            [&] { return apply_apc(model.circuit, layer, ch); });
    }
  }
  return g;
}

Generation gen_dfc(const QnnModel& model, const FeatureShape& shape,
                   const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  const int n = model.encoding.num_features;
  if (shape.image) {
    if (static_cast<long>(shape.height) * shape.width != n) {
      throw CircuitError(fmt::format("image shape {}x{} does not match {} model features",
                                     shape.height, shape.width, n));
    }
    for (ImageOp op : {ImageOp::kCrop, ImageOp::kRot90, ImageOp::kRot180, ImageOp::kRot270,
                       ImageOp::kFlipH, ImageOp::kFlipV}) {
      if ((op == ImageOp::kRot90 || op == ImageOp::kRot270) && shape.height != shape.width) {
        c.note(fmt::format("DFC: {} skipped on a non-square image", to_string(op)));
        continue;
      }
      c.add_transform(InputTransform{InputTransform::Image{op, shape.height, shape.width}});
    }
    return g;
  }
  std::vector<FeatureOp> ops;
  for (double v : config.dfc_add) ops.push_back({FeatureOp::Kind::kAdd, v});
  for (double v : config.dfc_mul) ops.push_back({FeatureOp::Kind::kMul, v});
  ops.push_back({FeatureOp::Kind::kSignFlip, 0.0});
  ops.push_back({FeatureOp::Kind::kOneMinus, 0.0});
  if (n < 2) c.note("DFC: fewer than two features, no pairs");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!config.dfc_all_pairs && j != i + 1) continue;
      for (const auto& a : ops) {
        for (const auto& b : ops) c.add_transform(InputTransform{InputTransform::Pair{i, j, a, b}});
      }
    }
  }
  return g;
}

Generation gen_apgc(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  const auto insts = model.circuit.instructions();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    if (!insts[i].ansatz_tag()) continue;
    std::vector<GateKind> targets;
    switch (insts[i].kind) {
      case GateKind::kRX: targets = {GateKind::kRZ}; break;
      case GateKind::kRY: targets = {GateKind::kRZ}; break;
      case GateKind::kRZ: targets = {GateKind::kRX, GateKind::kRY}; break;
      default: break;
    }
    for (GateKind to : targets) {
      c.add(ApgcDescriptor{i, insts[i].kind, to}, [&] {
        std::vector<Instruction> out(insts.begin(), insts.end());
        out[i].kind = to;
        return with_instructions(model.circuit, std::move(out));
      });
    }
  }
  if (g.mutants.empty()) c.note("APGC: no parameterized one-qubit ansatz gates");
  return g;
}

Generation gen_ls(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  const int layers = static_cast<int>(model.layers.size());
  if (layers < 2) c.note("LS: fewer than two layers");
  for (int i = 0; i < layers; ++i) {
    for (int j = i + 1; j < layers; ++j) {
      c.add(LsDescriptor{i, j}, [&] { return swap_layers(model.circuit, i, j); });
    }
  }
  return g;
}

Generation gen_ils(const QnnModel& model, const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  constexpr int kMaxPermutedBlocks = 6;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const int layer = static_cast<int>(l);
    const int blocks = static_cast<int>(model.layers[l].blocks.size());
    if (blocks < 2) {
      c.note(fmt::format("ILS: layer {} has a single block, skipped", l));
      continue;
    }
    std::vector<int> identity(blocks);
    std::iota(identity.begin(), identity.end(), 0);
    if (config.ils_full_permutations && blocks <= kMaxPermutedBlocks) {
      std::vector<int> order = identity;
      while (std::next_permutation(order.begin(), order.end())) {
        c.add(IlsDescriptor{layer, order},
              [&] { return reorder_blocks(model.circuit, layer, order); });
      }
      continue;
    }
    if (config.ils_full_permutations) {
      c.note(fmt::format("ILS: layer {} has {} blocks, using adjacent swaps only", l, blocks));
    }
    for (int k = 0; k + 1 < blocks; ++k) {
      std::vector<int> order = identity;
      std::swap(order[k], order[k + 1]);
      c.add(IlsDescriptor{layer, order},
            [&] { return reorder_blocks(model.circuit, layer, order); });
    }
  }
  return g;
}

Generation gen_ala(const QnnModel& model, const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  const int new_layer = layer_count(model.circuit);
  const auto insts = model.circuit.instructions();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const int layer = static_cast<int>(l);
    std::vector<Instruction> copy;
    std::size_t last = 0;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      if (!in_layer(insts[i], layer)) continue;
      copy.push_back(insts[i]);
      std::get<AnsatzTag>(copy.back().tag).layer = new_layer;
      last = i;
    }
    if (copy.empty()) continue;
    auto insert = [&](const std::vector<Instruction>& added) {
      std::vector<Instruction> out(insts.begin(), insts.begin() + last + 1);
      out.insert(out.end(), added.begin(), added.end());
      out.insert(out.end(), insts.begin() + last + 1, insts.end());
      return with_instructions(model.circuit, std::move(out));
    };

    const std::uint64_t seed = mix_seed(config.seed, 0xa1aULL, l);
    Rng rng(seed);
    std::map<std::string, std::string, std::less<>> names;
    Bindings extra;
    std::vector<Instruction> fresh = copy;
    for (auto& inst : fresh) {
      if (!inst.angle) continue;
      for (const auto& s : inst.angle->free_symbols()) {
        if (names.contains(s)) continue;
        const std::string name = fmt::format("ala{}_w[{}]", l, names.size());
        names.emplace(s, name);
        extra.emplace(name, rng.uniform(-kPi, kPi));
      }
      inst.angle = inst.angle->rename(names);
    }
    c.add(AlaDescriptor{layer, AlaInit::kRandom, seed}, [&] { return insert(fresh); },
          std::move(extra));
    c.add(AlaDescriptor{layer, AlaInit::kCopy, 0}, [&] { return insert(copy); });
  }
  return g;
}

Generation gen_ald(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  const auto insts = model.circuit.instructions();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const int layer = static_cast<int>(l);
    for (AldTarget target :
         {AldTarget::kFull, AldTarget::kRotationsOnly, AldTarget::kEntanglersOnly}) {
      auto doomed = [&](const Instruction& inst) {
        if (!in_layer(inst, layer)) return false;
        const BlockRole role = inst.ansatz_tag()->role;
        return target == AldTarget::kFull ||
               (target == AldTarget::kRotationsOnly && role == BlockRole::kRotation) ||
               (target == AldTarget::kEntanglersOnly && role == BlockRole::kEntangle);
      };
      if (std::none_of(insts.begin(), insts.end(), doomed)) continue;
      c.add(AldDescriptor{layer, target}, [&] {
        std::vector<Instruction> out;
        for (const auto& inst : insts) {
          if (!doomed(inst)) out.push_back(inst);
        }
        return with_instructions(model.circuit, std::move(out));
      });
    }
  }
  return g;
}

// --- baseline operators ----------------------------------------------------

Generation gen_gate_add(const QnnModel& model, const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  const auto insts = model.circuit.instructions();
  const int n = model.num_qubits();
  for (std::size_t pos = 0; pos <= insts.size(); ++pos) {
    for (GateKind kind : config.gate_set) {
      std::vector<std::vector<int>> placements;
      if (arity(kind) == 1) {
        for (int q = 0; q < n; ++q) placements.push_back({q});
      } else {
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (a != b) placements.push_back({a, b});
      }
      for (const auto& qubits : placements) {
        c.add(GateAddDescriptor{kind, qubits, pos}, [&] {
          std::vector<Instruction> out;
          out.reserve(insts.size() + 1);
          out.insert(out.end(), insts.begin(), insts.begin() + pos);
          std::optional<ParamExpr> angle;
          if (is_parameterized(kind)) angle = ParamExpr::constant(config.gate_add_angle);
          out.push_back(make_gate(kind, qubits, angle));
          out.insert(out.end(), insts.begin() + pos, insts.end());
          return with_instructions(model.circuit, std::move(out));
        });
      }
    }
  }
  return g;
}

Generation gen_gate_remove(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  const auto insts = model.circuit.instructions();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    c.add(GateRemoveDescriptor{i}, [&] {
      std::vector<Instruction> out(insts.begin(), insts.end());
      out.erase(out.begin() + i);
      return with_instructions(model.circuit, std::move(out));
    });
  }
  return g;
}

Generation gen_gate_replace(const QnnModel& model, const MutationConfig& config) {
  Generation g;
  Collector c(model, g);
  const auto insts = model.circuit.instructions();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const GateKind from = insts[i].kind;
    for (GateKind to : config.gate_set) {
      if (to == from || arity(to) != arity(from) ||
          is_parameterized(to) != is_parameterized(from)) {
        continue;
      }
      c.add(GateReplaceDescriptor{i, from, to}, [&] {
        std::vector<Instruction> out(insts.begin(), insts.end());
        out[i].kind = to;
        return with_instructions(model.circuit, std::move(out));
      });
    }
  }
  return g;
}

Generation gen_meas_add(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  const auto& measured = model.circuit.measured_qubits();
  for (int q = 0; q < model.num_qubits(); ++q) {
    if (std::find(measured.begin(), measured.end(), q) != measured.end()) continue;
    c.add(MeasAddDescriptor{q}, [&] {
      Circuit out = model.circuit;
      out.measure(q);
      return out;
    });
  }
  return g;
}

Generation gen_meas_remove(const QnnModel& model, const MutationConfig&) {
  Generation g;
  Collector c(model, g);
  for (int q : model.circuit.measured_qubits()) {
    c.add(MeasRemoveDescriptor{q}, [&] {
      std::vector<int> rest;
      for (int m : model.circuit.measured_qubits()) {
        if (m != q) rest.push_back(m);
      }
      Circuit out = model.circuit;
      out.set_measured(rest);
      return out;
    });
  }
  return g;
}

Generation generate(OperatorKind kind, const QnnModel& model, const FeatureShape& shape,
                    const MutationConfig& config) {
  Generation g;
  switch (kind) {
    case OperatorKind::kApc: g = gen_apc(model, config); break;
    case OperatorKind::kDfc: g = gen_dfc(model, shape, config); break;
    case OperatorKind::kApgc: g = gen_apgc(model, config); break;
    case OperatorKind::kLs: g = gen_ls(model, config); break;
    case OperatorKind::kIls: g = gen_ils(model, config); break;
    case OperatorKind::kAla: g = gen_ala(model, config); break;
    case OperatorKind::kAld: g = gen_ald(model, config); break;
    case OperatorKind::kGateAdd: g = gen_gate_add(model, config); break;
    case OperatorKind::kGateRemove: g = gen_gate_remove(model, config); break;
    case OperatorKind::kGateReplace: g = gen_gate_replace(model, config); break;
    case OperatorKind::kMeasAdd: g = gen_meas_add(model, config); break;
    case OperatorKind::kMeasRemove: g = gen_meas_remove(model, config); break;
  }
  const std::string prefix = lower(operator_name(kind));
  for (std::size_t i = 0; i < g.mutants.size(); ++i) {
    g.mutants[i].id = fmt::format("{}_{:04d}", prefix, i);
  }
  return g;
}

}  // namespace qmut
