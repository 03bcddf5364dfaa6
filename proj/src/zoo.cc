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

#include "qmut/zoo.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qmut/error.h"
#include "qmut/random.h"
#include "qmut/sim.h"

namespace qmut {

namespace {

constexpr double kPi = std::numbers::pi;

ParamExpr sym(const std::string& name) { return ParamExpr::symbol(name); }

std::string xname(int i) { return fmt::format("x[{}]", i); }

}  // namespace

FeatureMapFragment build_feature_map(FeatureMapKind kind, int num_qubits,
                                     int num_features, int reps,
                                     Entanglement entanglement) {
  FeatureMapFragment out;
  out.encoding.kind = kind;
  out.encoding.num_qubits = num_qubits;
  out.encoding.num_features = num_features;
  if (num_qubits < 1) throw CircuitError("feature map needs at least one qubit");
  if (num_features < 1) throw CircuitError("feature map needs at least one feature");

  if (kind == FeatureMapKind::kAmplitude) {
    if (num_qubits > 20 || num_features > (1 << num_qubits)) {
      throw CircuitError(fmt::format("amplitude embedding of {} features needs more than {} qubits",
                                     num_features, num_qubits));
    }
    Circuit c(num_qubits);
    std::size_t next = 0;
    for (int target = num_qubits - 1; target >= 0; --target) {
      const int k = num_qubits - 1 - target;
      const std::size_t count = std::size_t{1} << k;
      for (std::size_t i = 0; i < count; ++i) {
        c.append(make_gate(GateKind::kRY, {target}, sym(fmt::format("a[{}]", next++)),
                           FeatureMapTag{}));
        if (k == 0) continue;
        const std::size_t gi = i ^ (i >> 1);
        const std::size_t j = (i + 1) % count;
        const std::size_t gj = j ^ (j >> 1);
        const int control = target + 1 + std::countr_zero(gi ^ gj);
        c.append(make_gate(GateKind::kCX, {control, target}, std::nullopt, FeatureMapTag{}));
      }
    }
    out.circuit = std::move(c);
    return out;
  }

  if (num_features != num_qubits) {
    throw CircuitError(fmt::format("{} needs one qubit per feature ({} features, {} qubits)",
                                   to_string(kind), num_features, num_qubits));
  }
  if (reps < 1) throw CircuitError("feature map reps must be >= 1");
  Circuit c(num_qubits);
  for (int r = 0; r < reps; ++r) {
    for (int q = 0; q < num_qubits; ++q) {
      c.append(make_gate(GateKind::kH, {q}, std::nullopt, FeatureMapTag{}));
    }
    for (int q = 0; q < num_qubits; ++q) {
      c.append(make_gate(GateKind::kP, {q}, ParamExpr::constant(2.0) * sym(xname(q)),
                         FeatureMapTag{}));
    }
    if (kind != FeatureMapKind::kZZ) continue;
    for (int i = 0; i < num_qubits; ++i) {
      for (int j = i + 1; j < num_qubits; ++j) {
        if (entanglement == Entanglement::kLinear && j != i + 1) continue;
        const ParamExpr angle = ParamExpr::constant(2.0) * ParamExpr::pi_minus(xname(i)) *
                                ParamExpr::pi_minus(xname(j));
        c.append(make_gate(GateKind::kCX, {i, j}, std::nullopt, FeatureMapTag{}));
        c.append(make_gate(GateKind::kP, {j}, angle, FeatureMapTag{}));
        c.append(make_gate(GateKind::kCX, {i, j}, std::nullopt, FeatureMapTag{}));
      }
    }
  }
  out.circuit = std::move(c);
  return out;
}

namespace {

class AnsatzWriter {
 public:
  explicit AnsatzWriter(AnsatzFragment& f) : f_(f) {}

  void rotation(GateKind kind, int qubit, int layer, int block) {
    const std::string name = fmt::format("w[{}]", f_.weight_symbols.size());
    f_.weight_symbols.push_back(name);
    f_.circuit.append(make_gate(kind, {qubit}, sym(name),
                                AnsatzTag{layer, block, BlockRole::kRotation}));
  }
  void controlled_rotation(GateKind kind, int control, int target, int layer, int block) {
    const std::string name = fmt::format("w[{}]", f_.weight_symbols.size());
    f_.weight_symbols.push_back(name);
    f_.circuit.append(make_gate(kind, {control, target}, sym(name),
                                AnsatzTag{layer, block, BlockRole::kRotation}));
  }
  void entangle(int control, int target, int layer, int block) {
    f_.circuit.append(make_gate(GateKind::kCX, {control, target}, std::nullopt,
                                AnsatzTag{layer, block, BlockRole::kEntangle}));
  }

 private:
  AnsatzFragment& f_;
};

}  // namespace

AnsatzFragment build_ansatz(AnsatzKind kind, int num_qubits, int reps) {
  AnsatzFragment f;
  f.kind = kind;
  f.reps = reps;
  f.circuit = Circuit(num_qubits);
  AnsatzWriter w(f);

  if (kind == AnsatzKind::kQcnn) {
    if (num_qubits < 2 || !std::has_single_bit(static_cast<unsigned>(num_qubits))) {
      throw CircuitError(fmt::format("QCNN width {} is not a power of two >= 2", num_qubits));
    }
    std::vector<int> active(num_qubits);
    for (int q = 0; q < num_qubits; ++q) active[q] = q;
    int layer = 0;
    while (active.size() > 1) {
      const int m = static_cast<int>(active.size());
      int block = 0;
      for (int i = 0; i + 1 < m; ++i) {
        const int a = active[i], b = active[i + 1];
        w.rotation(GateKind::kRY, a, layer, block);
        w.rotation(GateKind::kRY, b, layer, block++);
        w.entangle(a, b, layer, block++);
        w.rotation(GateKind::kRY, a, layer, block);
        w.rotation(GateKind::kRY, b, layer, block++);
      }
      ++layer;
      for (int i = 0; i < m / 2; ++i) {
        w.controlled_rotation(GateKind::kCRY, active[i], active[i + m / 2], layer, i);
      }
      ++layer;
      active.erase(active.begin(), active.begin() + m / 2);
    }
    f.reps = layer / 2;
    f.measured = active;
    return f;
  }

  if (reps < 1) throw CircuitError("ansatz reps must be >= 1");
  const bool su2 = kind == AnsatzKind::kEfficientSU2;
  auto rotations = [&](int layer) {
    int block = 0;
    for (int q = 0; q < num_qubits; ++q) w.rotation(GateKind::kRY, q, layer, block);
    ++block;
    if (su2) {
      for (int q = 0; q < num_qubits; ++q) w.rotation(GateKind::kRZ, q, layer, block);
      ++block;
    }
    return block;
  };
  for (int r = 0; r < reps; ++r) {
    const int block = rotations(r);
    for (int q = 0; q + 1 < num_qubits; ++q) w.entangle(q, q + 1, r, block);
  }
  rotations(reps);
  for (int q = 0; q < num_qubits; ++q) f.measured.push_back(q);
  return f;
}

QnnModel assemble(const FeatureMapFragment& feature_map,
                  const AnsatzFragment& ansatz, int num_classes,
                  int feature_map_reps) {
  if (feature_map.circuit.num_qubits() != ansatz.circuit.num_qubits()) {
    throw CircuitError(fmt::format("width mismatch: feature map has {} qubits, ansatz {}",
                                   feature_map.circuit.num_qubits(),
                                   ansatz.circuit.num_qubits()));
  }
  if (num_classes < 2) throw CircuitError("a classifier needs at least two classes");
  QnnModel m;
  m.circuit = feature_map.circuit;
  m.circuit.append(ansatz.circuit);
  m.circuit.set_measured(ansatz.measured);
  m.encoding = feature_map.encoding;
  m.feature_symbols = feature_map.encoding.symbols();
  m.weight_symbols = ansatz.weight_symbols;
  m.layers = layer_structure(m.circuit);
  m.num_classes = num_classes;
  m.feature_map = feature_map.encoding.kind;
  m.ansatz = ansatz.kind;
  m.feature_map_reps = feature_map_reps;
  m.ansatz_reps = ansatz.reps;
  m.validate();
  return m;
}

QnnModel build_model(const ModelSpec& spec) {
  const int qubits =
      spec.feature_map == FeatureMapKind::kAmplitude ? spec.num_qubits : spec.num_features;
  const auto fm = build_feature_map(spec.feature_map, qubits, spec.num_features,
                                    spec.feature_map_reps, spec.entanglement);
  const auto an = build_ansatz(spec.ansatz, qubits, spec.ansatz_reps);
  return assemble(fm, an, spec.num_classes, spec.feature_map_reps);
}

double shot_loss(const QnnModel& model, const Bindings& weights,
                 const Dataset& data, std::uint64_t shots, std::uint64_t seed) {
  if (data.size() == 0) throw DataError("loss over an empty dataset");
  const Decoder decoder = model.decoder();
  const auto& measured = model.circuit.measured_qubits();
  double total = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const Circuit bound = model.circuit.bind(model.bindings(data.samples.row(r), weights));
    const ShotCounts counts = sample(run(bound), measured, shots, mix_seed(seed, r));
    std::uint64_t wrong = 0;
    for (std::size_t o = 0; o < counts.counts.size(); ++o) {
      if (decoder.decode(o, counts.width) != data.labels[r]) wrong += counts.counts[o];
    }
    total += static_cast<double>(wrong) / static_cast<double>(shots);
  }
  return total / static_cast<double>(data.size());
}

double accuracy(const QnnModel& model, const Bindings& weights,
                const Dataset& data, std::uint64_t shots, std::uint64_t seed) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (predict(model, data.samples.row(r), weights, shots, evaluation_seed(seed, r)) ==
        data.labels[r]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train_spsa(const QnnModel& model, const Dataset& train,
                       const SpsaOptions& options) {
  if (options.iterations < 1) throw ConfigError("training needs at least one iteration");
  if (train.size() == 0) throw DataError("empty training set");
  const std::size_t n = model.weight_symbols.size();
  Rng rng(mix_seed(options.seed, 0x7a11ULL));
  std::vector<double> theta(n);
  for (double& t : theta) t = rng.uniform(-kPi, kPi);

  auto to_bindings = [&](const std::vector<double>& v) {
    Bindings b;
    for (std::size_t i = 0; i < n; ++i) b.emplace(model.weight_symbols[i], v[i]);
    return b;
  };

  TrainResult best;
  best.weights = to_bindings(theta);
  best.loss = shot_loss(model, best.weights, train, options.shots, mix_seed(options.seed, 0ULL));
  if (n == 0) return best;

  std::vector<double> plus(n), minus(n), delta(n);
  for (int k = 0; k < options.iterations; ++k) {
    const double ak = options.a / std::pow(k + 1 + options.stability, options.alpha);
    const double ck = options.c / std::pow(k + 1, options.gamma);
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = (rng.next() & 1) ? 1.0 : -1.0;
      plus[i] = theta[i] + ck * delta[i];
      minus[i] = theta[i] - ck * delta[i];
    }
    // Both sides share the shot seeds so the difference is not drowned in
    // sampling noise.
    const std::uint64_t seed = mix_seed(options.seed, 1ULL, static_cast<std::uint64_t>(k));
    const double lp = shot_loss(model, to_bindings(plus), train, options.shots, seed);
    const double lm = shot_loss(model, to_bindings(minus), train, options.shots, seed);
    const double g = (lp - lm) / (2.0 * ck);
    for (std::size_t i = 0; i < n; ++i) theta[i] -= ak * g * delta[i];

    const Bindings current = to_bindings(theta);
    const double loss =
        shot_loss(model, current, train, options.shots, mix_seed(options.seed, 0ULL));
    if (loss < best.loss) {
      best.loss = loss;
      best.weights = current;
      best.best_iteration = k + 1;
    }
  }
  return best;
}

void save_weights(const std::filesystem::path& path, const QnnModel& model,
                  const Bindings& weights) {
  nlohmann::json j;
  j["fingerprint"] = model.fingerprint();
  j["weights"] = nlohmann::json::object();
  for (const auto& [k, v] : weights) j["weights"][k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Bindings load_weights(const std::filesystem::path& path, const QnnModel& model) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open weights file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (!j.is_object() || !j.contains("fingerprint") || !j.contains("weights") ||
      !j["weights"].is_object()) {
    throw ConfigError(path.string() + ": expected {\"fingerprint\", \"weights\"}");
  }
  if (j["fingerprint"] != model.fingerprint()) {
    throw ConfigError(fmt::format("{}: weights belong to model {}, not {}", path.string(),
                                  j["fingerprint"].get<std::string>(), model.fingerprint()));
  }
  Bindings out;
  for (const auto& [k, v] : j["weights"].items()) {
    if (!v.is_number()) throw ConfigError(path.string() + ": weight " + k + " is not a number");
    out.emplace(k, v.get<double>());
  }
  for (const auto& s : model.weight_symbols) {
    if (!out.contains(s)) throw ConfigError(path.string() + ": missing weight " + s);
  }
  if (out.size() != model.weight_symbols.size()) {
    throw ConfigError(path.string() + ": unexpected extra weights");
  }
  return out;
}

}  // namespace qmut
