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

#include "qmut/campaign.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "qmut/error.h"
#include "qmut/qasm.h"
#include "qmut/random.h"
#include "qmut/report.h"

namespace qmut {

namespace {

using nlohmann::json;

// Reads one JSON object, checking types as it goes; finish() rejects any key
// that was never read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = j_.at(key);
    const std::string at = child(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(at + ": expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(at + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(at + ": expected an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() &&
          v.get<long long>() < 0) {
        throw ConfigError(at + ": expected a non-negative integer");
      }
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(at + ": expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError(at + ": expected an array of numbers");
      std::vector<double> out;
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(at + ": expected an array of numbers");
        out.push_back(x.get<double>());
      }
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!v.is_array()) throw ConfigError(at + ": expected an array of strings");
      std::vector<std::string> out;
      for (const auto& x : v) {
        if (!x.is_string()) throw ConfigError(at + ": expected an array of strings");
        out.push_back(x.get<std::string>());
      }
      return out;
    }
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) throw ConfigError(fmt::format("unknown key '{}'", child(k)));
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int positive(const std::optional<int>& v, int fallback, const std::string& path) {
  const int x = v.value_or(fallback);
  if (x < 1) throw ConfigError(path + ": must be >= 1");
  return x;
}

std::pair<double, double> number_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path + ": expected [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

DatasetConfig parse_dataset(const json& j) {
  ObjectReader r(j, "dataset");
  DatasetConfig d;
  const auto source = r.get<std::string>("source");
  if (!source) throw ConfigError("dataset.source: required (blobs, csv, images)");
  if (*source == "blobs") {
    d.source = DatasetConfig::Source::kBlobs;
  } else if (*source == "csv") {
    d.source = DatasetConfig::Source::kCsv;
  } else if (*source == "images") {
    d.source = DatasetConfig::Source::kImages;
  } else {
    throw ConfigError("dataset.source: expected blobs, csv or images, got " + *source);
  }
  d.path = r.get<std::string>("path").value_or("");
  d.label_column = r.get<std::string>("label_column").value_or("label");
  if (d.source == DatasetConfig::Source::kCsv && d.path.empty()) {
    throw ConfigError("dataset.path: required for csv data");
  }
  if (r.has("image")) {
    ObjectReader im(r.raw("image"), "dataset.image");
    d.image_height = positive(im.get<int>("height"), 0, "dataset.image.height");
    d.image_width = positive(im.get<int>("width"), 0, "dataset.image.width");
    im.finish();
  }
  if (r.has("blobs")) {
    ObjectReader b(r.raw("blobs"), "dataset.blobs");
    d.per_class = positive(b.get<int>("per_class"), d.per_class, "dataset.blobs.per_class");
    d.features = positive(b.get<int>("features"), d.features, "dataset.blobs.features");
    d.classes = positive(b.get<int>("classes"), d.classes, "dataset.blobs.classes");
    d.separation = b.get<double>("separation").value_or(d.separation);
    b.finish();
  }
  if (r.has("images")) {
    ObjectReader b(r.raw("images"), "dataset.images");
    d.per_class = positive(b.get<int>("per_class"), d.per_class, "dataset.images.per_class");
    d.image_height = positive(b.get<int>("height"), 8, "dataset.images.height");
    d.image_width = positive(b.get<int>("width"), 8, "dataset.images.width");
    d.classes = positive(b.get<int>("classes"), d.classes, "dataset.images.classes");
    b.finish();
  } else if (d.source == DatasetConfig::Source::kImages) {
    d.image_height = d.image_width = 8;
  }
  if (r.has("preprocess")) {
    ObjectReader p(r.raw("preprocess"), "dataset.preprocess");
    if (auto v = p.get<int>("one_vs_rest")) d.one_vs_rest = *v;
    if (p.has("resize")) {
      const json& v = p.raw("resize");
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
          !v[1].is_number_integer() || v[0].get<int>() < 1 || v[1].get<int>() < 1) {
        throw ConfigError("dataset.preprocess.resize: expected [height, width]");
      }
      d.resize = std::pair{v[0].get<int>(), v[1].get<int>()};
    }
    if (auto v = p.get<int>("pca")) d.pca = positive(v, 1, "dataset.preprocess.pca");
    if (p.has("scale")) {
      const json& v = p.raw("scale");
      if (v.is_boolean()) {
        d.scale_enabled = v.get<bool>();
      } else {
        d.scale = number_pair(v, "dataset.preprocess.scale");
      }
    }
    p.finish();
  }
  d.split_seed = r.get<std::uint64_t>("split_seed").value_or(0);
  d.test_size = positive(r.get<int>("test_size"), 20, "dataset.test_size");
  r.finish();
  return d;
}

ModelConfig parse_model(const json& j) {
  ObjectReader r(j, "model");
  ModelConfig m;
  if (auto v = r.get<std::string>("feature_map")) m.feature_map = parse_feature_map_kind(*v);
  if (auto v = r.get<std::string>("ansatz")) m.ansatz = parse_ansatz_kind(*v);
  m.feature_map_reps = positive(r.get<int>("feature_map_reps"), 1, "model.feature_map_reps");
  m.ansatz_reps = positive(r.get<int>("ansatz_reps"), 1, "model.ansatz_reps");
  if (auto v = r.get<std::string>("entanglement")) {
    if (*v == "linear") {
      m.entanglement = Entanglement::kLinear;
    } else if (*v == "full") {
      m.entanglement = Entanglement::kFull;
    } else {
      throw ConfigError("model.entanglement: expected linear or full");
    }
  }
  if (auto v = r.get<int>("qubits")) m.qubits = positive(v, 1, "model.qubits");
  if (auto v = r.get<int>("classes")) m.classes = positive(v, 2, "model.classes");
  r.finish();
  return m;
}

TrainingConfig parse_training(const json& j) {
  ObjectReader r(j, "training");
  TrainingConfig t;
  t.iterations = positive(r.get<int>("iterations"), t.iterations, "training.iterations");
  t.seed = r.get<std::uint64_t>("seed");
  t.weights = r.get<std::string>("weights").value_or("");
  if (r.has("spsa")) {
    ObjectReader s(r.raw("spsa"), "training.spsa");
    t.a = s.get<double>("a").value_or(t.a);
    t.c = s.get<double>("c").value_or(t.c);
    s.finish();
  }
  r.finish();
  return t;
}

MutationConfig parse_operator_config(const json& j) {
  ObjectReader r(j, "operator_config");
  MutationConfig m;
  if (auto v = r.get<std::vector<double>>("apc_add")) m.apc_add = *v;
  if (auto v = r.get<std::vector<double>>("apc_scale")) m.apc_scale = *v;
  if (auto v = r.get<std::vector<double>>("dfc_add")) m.dfc_add = *v;
  if (auto v = r.get<std::vector<double>>("dfc_mul")) m.dfc_mul = *v;
  m.dfc_all_pairs = r.get<bool>("dfc_all_pairs").value_or(false);
  m.ils_full_permutations = r.get<bool>("ils_full_permutations").value_or(false);
  if (auto v = r.get<std::vector<std::string>>("gate_set")) {
    m.gate_set.clear();
    for (const auto& name : *v) {
      auto kind = gate_from_name(name);
      if (!kind) throw ConfigError("operator_config.gate_set: unknown gate " + name);
      if (std::find(m.gate_set.begin(), m.gate_set.end(), *kind) == m.gate_set.end()) {
        m.gate_set.push_back(*kind);
      }
    }
  }
  m.gate_add_angle = r.get<double>("gate_add_angle").value_or(m.gate_add_angle);
  r.finish();
  return m;
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", stage, e.what()));
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(fmt::format("{}: {}", stage, e.what()));
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

CampaignConfig CampaignConfig::from_json(const json& j) {
  ObjectReader r(j, "");
  CampaignConfig c;
  c.name = r.get<std::string>("name").value_or(c.name);
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("name: must be a non-empty plain name");
  }
  if (!r.has("dataset")) throw ConfigError("dataset: required");
  c.dataset = parse_dataset(r.raw("dataset"));
  if (!r.has("model")) throw ConfigError("model: required");
  c.model = parse_model(r.raw("model"));
  if (r.has("training")) c.training = parse_training(r.raw("training"));
  const auto ops = r.get<std::vector<std::string>>("operators");
  if (!ops || ops->empty()) throw ConfigError("operators: select at least one operator");
  for (const auto& name : *ops) {
    for (OperatorKind k : parse_operators(name)) {
      if (std::find(c.operators.begin(), c.operators.end(), k) == c.operators.end()) {
        c.operators.push_back(k);
      }
    }
  }
  if (r.has("operator_config")) c.mutation = parse_operator_config(r.raw("operator_config"));
  if (r.has("dedup")) {
    ObjectReader d(r.raw("dedup"), "dedup");
    c.dedup_enabled = d.get<bool>("enabled").value_or(true);
    c.dedup.semantic = d.get<bool>("semantic").value_or(c.dedup.semantic);
    c.dedup.probes = positive(d.get<int>("probes"), c.dedup.probes, "dedup.probes");
    c.dedup.max_qubits = positive(d.get<int>("max_qubits"), c.dedup.max_qubits, "dedup.max_qubits");
    d.finish();
  }
  const auto shots = r.get<std::uint64_t>("shots").value_or(kDefaultShots);
  if (shots < 1) throw ConfigError("shots: must be >= 1");
  c.shots = shots;
  c.seed = r.get<std::uint64_t>("seed").value_or(0);
  c.output = r.get<std::string>("output").value_or(c.output);
  r.finish();
  c.mutation.seed = c.seed;
  return c;
}

CampaignConfig CampaignConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  CampaignConfig c = from_json(j);
  const auto base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  resolve(c.dataset.path);
  resolve(c.training.weights);
  return c;
}

PreparedData prepare_data(const DatasetConfig& config) {
  Dataset ds;
  switch (config.source) {
    case DatasetConfig::Source::kBlobs:
      ds = synth_blobs(config.per_class, config.features, config.classes, config.separation,
                       config.split_seed);
      break;
    case DatasetConfig::Source::kImages:
      ds = synth_images(config.per_class, config.image_height, config.image_width,
                        config.classes, config.split_seed);
      break;
    case DatasetConfig::Source::kCsv:
      ds = load_csv(config.path, config.label_column);
      if (config.image_height > 0) {
        ds.shape = FeatureShape::image_of(config.image_height, config.image_width);
        ds.validate();
      }
      break;
  }
  if (config.one_vs_rest) {
    if (*config.one_vs_rest < 0 || *config.one_vs_rest >= ds.num_classes) {
      throw DataError(fmt::format("one_vs_rest class {} not in [0, {})", *config.one_vs_rest,
                                  ds.num_classes));
    }
    ds = one_vs_rest(ds, *config.one_vs_rest);
  }
  if (config.resize) {
    if (!ds.shape.image) throw DataError("resize needs image data");
    ds = resize_images(ds, config.resize->first, config.resize->second);
  }
  if (config.pca) ds = pca_reduce(ds, static_cast<std::size_t>(*config.pca)).reduced;
  if (config.scale_enabled) {
    const auto range =
        config.scale.value_or(ds.shape.image ? std::pair{0.0, 1.0} : std::pair{0.0, std::numbers::pi});
    ds = scale_features(ds, range.first, range.second);
  }
  auto [train, test] = split(ds, static_cast<std::size_t>(config.test_size), config.split_seed);
  return {std::move(train), std::move(test)};
}

QnnModel build_campaign_model(const CampaignConfig& config, const Dataset& data) {
  ModelSpec spec;
  spec.feature_map = config.model.feature_map;
  spec.feature_map_reps = config.model.feature_map_reps;
  spec.entanglement = config.model.entanglement;
  spec.ansatz = config.model.ansatz;
  spec.ansatz_reps = config.model.ansatz_reps;
  spec.num_features = static_cast<int>(data.num_features());
  spec.num_classes = config.model.classes > 0 ? config.model.classes : data.num_classes;
  if (spec.num_classes < data.num_classes) {
    throw ConfigError(fmt::format("model.classes {} is below the dataset's {} classes",
                                  spec.num_classes, data.num_classes));
  }
  if (spec.feature_map == FeatureMapKind::kAmplitude) {
    int q = config.model.qubits;
    if (q == 0) {
      q = 1;
      while ((1 << q) < spec.num_features) ++q;
    }
    spec.num_qubits = q;
  } else if (config.model.qubits != 0 && config.model.qubits != spec.num_features) {
    throw ConfigError(fmt::format("model.qubits {} differs from the {} features {} needs",
                                  config.model.qubits, spec.num_features,
                                  to_string(spec.feature_map)));
  }
  if (spec.ansatz == AnsatzKind::kQcnn && spec.num_classes != 2) {
    throw ConfigError("QCNN measures one qubit and is binary; use dataset.preprocess.one_vs_rest");
  }
  return build_model(spec);
}

MutationSet generate_mutants(const CampaignConfig& config, const QnnModel& model,
                             const FeatureShape& shape, Timings* timings) {
  MutationSet set;
  for (OperatorKind op : config.operators) {
    const auto t0 = std::chrono::steady_clock::now();
    Generation g = generate(op, model, shape, config.mutation);
    const double gen = seconds_since(t0);
    set.generated[op] = g.mutants.size();
    for (auto& n : g.notes) set.notes.push_back(std::move(n));

    const auto t1 = std::chrono::steady_clock::now();
    std::vector<Mutant> kept;
    if (config.dedup_enabled) {
      std::map<std::string, Descriptor> descriptors;
      for (const auto& m : g.mutants) descriptors.emplace(m.id, m.descriptor);
      DedupResult d = dedup(std::move(g.mutants), config.dedup);
      set.discarded_count[op] = d.discarded.size();
      for (auto& rec : d.discarded) {
        set.discarded_descriptors.push_back(descriptors.at(rec.discarded));
        set.discarded.push_back(std::move(rec));
      }
      kept = std::move(d.kept);
    } else {
      set.discarded_count[op] = 0;
      kept = std::move(g.mutants);
    }
    const double dd = seconds_since(t1);
    for (auto& m : kept) set.mutants.push_back(std::move(m));
    if (timings) {
      timings->generation_seconds += gen;
      timings->dedup_seconds += dd;
      timings->per_operator[op].generation_seconds = gen;
    }
  }
  return set;
}

Circuit export_circuit(const Mutant& mutant, const QnnModel& model,
                       const Bindings& weights, const TestSample& sample) {
  if (const auto* t = std::get_if<InputTransform>(&mutant.payload)) {
    return model.circuit.bind(model.bindings(t->apply(sample.features), weights));
  }
  Bindings b = model.bindings(sample.features, weights);
  for (const auto& [k, v] : mutant.extra_bindings) b.insert_or_assign(k, v);
  return mutant.circuit()->bind(b);
}

CampaignResult run_campaign(const CampaignConfig& config, const RunOptions& options) {
  CampaignResult res;
  res.config = config;
  const std::filesystem::path out_dir = config.output;
  Timings& tm = res.timings;

  auto t0 = std::chrono::steady_clock::now();
  res.data = in_stage("data", [&] { return prepare_data(config.dataset); });
  tm.data_seconds = seconds_since(t0);

  res.model = in_stage("model", [&] { return build_campaign_model(config, res.data.train); });

  t0 = std::chrono::steady_clock::now();
  in_stage("training", [&] {
    if (!config.training.weights.empty()) {
      res.weights = load_weights(config.training.weights, res.model);
      res.training_loss =
          shot_loss(res.model, res.weights, res.data.train, config.shots, config.seed);
    } else {
      SpsaOptions spsa;
      spsa.iterations = config.training.iterations;
      spsa.seed = config.training.seed.value_or(config.seed);
      spsa.shots = config.shots;
      spsa.a = config.training.a;
      spsa.c = config.training.c;
      TrainResult tr = train_spsa(res.model, res.data.train, spsa);
      res.weights = std::move(tr.weights);
      res.training_loss = tr.loss;
    }
    res.train_accuracy =
        accuracy(res.model, res.weights, res.data.train, config.shots, mix_seed(config.seed, 1ULL));
    res.test_accuracy = accuracy(res.model, res.weights, res.data.test, config.shots, config.seed);
    if (options.write_artifacts) {
      std::filesystem::create_directories(out_dir);
      save_weights(out_dir / "model.weights.json", res.model, res.weights);
    }
    return 0;
  });
  tm.training_seconds = seconds_since(t0);
  if (options.until == Stage::kTrain) return res;

  t0 = std::chrono::steady_clock::now();
  res.suite = in_stage("test suite", [&] {
    return build_test_suite(res.model, res.weights, res.data.test, config.shots, config.seed);
  });
  tm.suite_seconds = seconds_since(t0);

  res.mutations = in_stage("generation", [&] {
    return generate_mutants(config, res.model, res.data.train.shape, &tm);
  });

  t0 = std::chrono::steady_clock::now();
  if (options.write_artifacts) {
    in_stage("export", [&] {
      std::map<std::string, std::string> paths;
      const TestSample& first = res.suite->samples.front();
      for (const auto& m : res.mutations.mutants) {
        Circuit bound;
        try {
          bound = export_circuit(m, res.model, res.weights, first);
        } catch (const BindError&) {
          continue;  // incompetent and unbindable: nothing to export
        }
        const std::filesystem::path rel = std::filesystem::path("qasm") / config.name /
                                          std::string(operator_name(m.op())) / (m.id + ".qasm");
        write_file(out_dir / rel, emit_qasm(bound));
        paths[m.id] = rel.generic_string();
      }
      write_file(out_dir / "mutants.jsonl", mutants_jsonl(res.mutations, paths));
      return 0;
    });
  }
  tm.export_seconds = seconds_since(t0);
  if (options.until == Stage::kMutate) return res;

  in_stage("evaluation", [&] {
    std::vector<MutantResult> results;
    std::size_t begin = 0;
    const auto& all = res.mutations.mutants;
    while (begin < all.size()) {
      std::size_t end = begin;
      while (end < all.size() && all[end].op() == all[begin].op()) ++end;
      const auto t1 = std::chrono::steady_clock::now();
      auto batch = evaluate_all(std::span(all).subspan(begin, end - begin), res.model,
                                res.weights, *res.suite, config.shots, config.seed,
                                options.workers);
      const double secs = seconds_since(t1);
      tm.per_operator[all[begin].op()].evaluation_seconds += secs;
      tm.evaluation_seconds += secs;
      for (auto& r : batch) results.push_back(std::move(r));
      begin = end;
    }
    res.report = score(std::move(results), config.operators);
    for (auto& s : res.report->operators) {
      if (auto it = res.mutations.discarded_count.find(s.op);
          it != res.mutations.discarded_count.end()) {
        s.discarded = it->second;
      }
    }
    return 0;
  });

  if (options.write_artifacts) {
    in_stage("report", [&] {
      write_report_artifacts(res, out_dir);
      return 0;
    });
  }
  return res;
}

}  // namespace qmut
