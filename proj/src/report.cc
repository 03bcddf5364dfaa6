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

#include "qmut/report.h"

#include <fstream>

#include <fmt/format.h>

#include "qmut/error.h"

namespace qmut {

namespace {

using nlohmann::json;

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::string dataset_name(const DatasetConfig& d) {
  switch (d.source) {
    case DatasetConfig::Source::kBlobs: return "blobs";
    case DatasetConfig::Source::kImages: return "images";
    case DatasetConfig::Source::kCsv: return std::filesystem::path(d.path).stem().string();
  }
  return "?";
}

std::string full(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string format_cell(std::size_t killed, std::size_t total) {
  return fmt::format("{}/{}", killed, total);
}

std::string format_score(std::optional<double> score) {
  return score ? fmt::format("{:.2f}", *score) : "n/a";
}

json report_json(const CampaignResult& r) {
  json j;
  j["campaign"] = r.config.name;
  j["dataset"] = {{"name", dataset_name(r.config.dataset)},
                  {"train_size", r.data.train.size()},
                  {"test_size", r.data.test.size()},
                  {"features", r.data.train.num_features()},
                  {"classes", r.data.train.num_classes}};
  j["model"] = {{"feature_map", std::string(to_string(r.model.feature_map))},
                {"feature_map_reps", r.model.feature_map_reps},
                {"ansatz", std::string(to_string(r.model.ansatz))},
                {"ansatz_reps", r.model.ansatz_reps},
                {"qubits", r.model.num_qubits()},
                {"classes", r.model.num_classes},
                {"layers", r.model.layers.size()},
                {"weights", r.model.weight_symbols.size()},
                {"measured_qubits", r.model.circuit.measured_qubits()},
                {"fingerprint", r.model.fingerprint()}};
  j["training"] = {{"loss", r.training_loss},
                   {"train_accuracy", r.train_accuracy},
                   {"test_accuracy", r.test_accuracy}};
  j["shots"] = r.config.shots;
  j["seed"] = r.config.seed;
  if (r.suite) {
    json ids = json::array();
    for (const auto& s : r.suite->samples) ids.push_back(s.id);
    j["test_suite"] = {{"size", r.suite->samples.size()},
                       {"sample_ids", ids},
                       {"rejected", r.suite->rejected}};
  }
  if (r.report) {
    const CampaignReport& rep = *r.report;
    json ops = json::array();
    for (const auto& s : rep.operators) {
      const auto gen = r.mutations.generated.find(s.op);
      ops.push_back({{"operator", std::string(operator_name(s.op))},
                     {"directed", is_directed(s.op)},
                     {"input_mutation", s.input_mutation},
                     {"generated", gen == r.mutations.generated.end() ? 0 : gen->second},
                     {"discarded", s.discarded},
                     {"total", s.total},
                     {"killed", s.killed},
                     {"survived", s.survived},
                     {"incompetent", s.incompetent},
                     {"mutation_score", optional_number(s.mutation_score())}});
    }
    j["operators"] = ops;
    j["totals"] = {{"total", rep.total},
                   {"killed", rep.killed},
                   {"survived", rep.survived},
                   {"incompetent", rep.incompetent}};
    j["mutation_score"] = optional_number(rep.score);
    j["survival_rate"] = optional_number(rep.survival);
    json mutants = json::array();
    for (const auto& m : rep.results) {
      json e = {{"id", m.id},
                {"operator", std::string(operator_name(m.op))},
                {"verdict", verdict_name(m.verdict)}};
      if (const auto* k = std::get_if<Killed>(&m.verdict)) e["first_killing_sample"] = k->first_sample;
      if (const auto* i = std::get_if<Incompetent>(&m.verdict)) e["reason"] = i->reason;
      mutants.push_back(e);
    }
    j["mutants"] = mutants;
  }
  j["notes"] = r.mutations.notes;
  return j;
}

json timings_json(const Timings& t) {
  json ops = json::object();
  for (const auto& [op, ot] : t.per_operator) {
    ops[std::string(operator_name(op))] = {{"generation_seconds", ot.generation_seconds},
                                           {"evaluation_seconds", ot.evaluation_seconds}};
  }
  return {{"data_seconds", t.data_seconds},
          {"training_seconds", t.training_seconds},
          {"suite_seconds", t.suite_seconds},
          {"generation_seconds", t.generation_seconds},
          {"dedup_seconds", t.dedup_seconds},
          {"export_seconds", t.export_seconds},
          {"evaluation_seconds", t.evaluation_seconds},
          {"operators", ops}};
}

namespace {

std::optional<double> json_score(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

double op_seconds(const json& timings, const std::string& op, const char* key) {
  if (!timings.is_object() || !timings.contains("operators")) return 0.0;
  const json& ops = timings["operators"];
  if (!ops.contains(op)) return 0.0;
  return ops[op].value(key, 0.0);
}

}  // namespace

std::string render_text(const json& report, const json& timings) {
  if (!report.contains("operators")) throw Error("report has no evaluation results");
  const json& ops = report["operators"];
  std::string out;

  // Summary row in the shape of a results table: MS then killed/total cells.
  std::vector<std::string> header = {"Dataset", "FM", "Ansatz", "MS"};
  std::vector<std::string> row = {report["dataset"]["name"].get<std::string>(),
                                  report["model"]["feature_map"].get<std::string>(),
                                  report["model"]["ansatz"].get<std::string>(),
                                  format_score(json_score(report["mutation_score"]))};
  for (const auto& o : ops) {
    std::string name = o["operator"].get<std::string>();
    if (o["input_mutation"].get<bool>()) name += "*";
    header.push_back(name);
    row.push_back(format_cell(o["killed"].get<std::size_t>(), o["total"].get<std::size_t>()));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    width[i] = std::max(header[i].size(), row[i].size());
  }
  for (const auto* line : {&header, &row}) {
    for (std::size_t i = 0; i < line->size(); ++i) {
      out += fmt::format("{:<{}}", (*line)[i], width[i] + (i + 1 < line->size() ? 2 : 0));
    }
    out += '\n';
  }

  out += '\n';
  out += fmt::format("{:<11}{:>9}{:>7}{:>9}{:>13}{:>7}{:>11}{:>9}{:>10}{:>11}\n", "Operator",
                     "Generated", "Killed", "Survived", "Incompetent", "Total", "Discarded",
                     "MS", "Gen. (s)", "Eval. (s)");
  for (const auto& o : ops) {
    const std::string name = o["operator"].get<std::string>();
    out += fmt::format("{:<11}{:>9}{:>7}{:>9}{:>13}{:>7}{:>11}{:>9}{:>10.3f}{:>11.3f}\n",
                       name + (o["input_mutation"].get<bool>() ? "*" : ""),
                       o["generated"].get<std::size_t>(), o["killed"].get<std::size_t>(),
                       o["survived"].get<std::size_t>(), o["incompetent"].get<std::size_t>(),
                       o["total"].get<std::size_t>(), o["discarded"].get<std::size_t>(),
                       format_score(json_score(o["mutation_score"])),
                       op_seconds(timings, name, "generation_seconds"),
                       op_seconds(timings, name, "evaluation_seconds"));
  }
  const json& t = report["totals"];
  out += fmt::format("\nMutation score {} ({} killed of {} competent; {} incompetent)\n",
                     format_score(json_score(report["mutation_score"])),
                     t["killed"].get<std::size_t>(),
                     t["killed"].get<std::size_t>() + t["survived"].get<std::size_t>(),
                     t["incompetent"].get<std::size_t>());
  if (report.contains("test_suite")) {
    out += fmt::format("Test suite {} samples ({} rejected), {} shots, seed {}\n",
                       report["test_suite"]["size"].get<std::size_t>(),
                       report["test_suite"]["rejected"].size(),
                       report["shots"].get<std::uint64_t>(), report["seed"].get<std::uint64_t>());
  }
  bool any_input = false;
  for (const auto& o : ops) any_input = any_input || o["input_mutation"].get<bool>();
  if (any_input) out += "* input mutation: kills show where the original decision boundary is fragile\n";
  return out;
}

std::string render_csv(const json& report, const json& timings) {
  if (!report.contains("operators")) throw Error("report has no evaluation results");
  std::vector<std::string> header = {"dataset", "feature_map", "ansatz", "mutation_score"};
  std::vector<std::string> row = {csv_field(report["dataset"]["name"].get<std::string>()),
                                  report["model"]["feature_map"].get<std::string>(),
                                  report["model"]["ansatz"].get<std::string>()};
  const auto ms = json_score(report["mutation_score"]);
  row.push_back(ms ? full(*ms) : "");
  double gen = 0.0, eval = 0.0;
  for (const auto& o : report["operators"]) {
    const std::string name = o["operator"].get<std::string>();
    header.push_back(name + "_killed");
    header.push_back(name + "_total");
    row.push_back(std::to_string(o["killed"].get<std::size_t>()));
    row.push_back(std::to_string(o["total"].get<std::size_t>()));
    gen += op_seconds(timings, name, "generation_seconds");
    eval += op_seconds(timings, name, "evaluation_seconds");
  }
  header.push_back("generation_seconds");
  header.push_back("evaluation_seconds");
  row.push_back(full(gen));
  row.push_back(full(eval));
  return fmt::format("{}\n{}\n", fmt::join(header, ","), fmt::join(row, ","));
}

std::string kill_matrix_csv(const CampaignReport& report, const TestSuite& suite) {
  std::string out = "mutant,operator";
  for (const auto& s : suite.samples) out += fmt::format(",s{}", s.id);
  out += '\n';
  for (const auto& r : report.results) {
    out += r.id + "," + std::string(operator_name(r.op));
    const bool incompetent = std::holds_alternative<Incompetent>(r.verdict);
    for (std::size_t i = 0; i < suite.samples.size(); ++i) {
      if (incompetent) {
        out += ",I";
      } else {
        out += r.predictions[i] == suite.samples[i].label ? ",S" : ",K";
      }
    }
    out += '\n';
  }
  return out;
}

std::string predictions_csv(const CampaignReport& report, const TestSuite& suite) {
  std::string out = "sample_id,true_label,original";
  for (const auto& r : report.results) out += "," + r.id;
  out += '\n';
  for (std::size_t i = 0; i < suite.samples.size(); ++i) {
    const auto& s = suite.samples[i];
    // Suite samples are exactly the ones the original predicts correctly.
    out += fmt::format("{},{},{}", s.id, s.label, s.label);
    for (const auto& r : report.results) {
      out += r.predictions.empty() ? "," : fmt::format(",{}", r.predictions[i]);
    }
    out += '\n';
  }
  return out;
}

std::string mutants_jsonl(const MutationSet& set,
                          const std::map<std::string, std::string>& qasm_paths) {
  std::string out;
  for (const auto& m : set.mutants) {
    json j = {{"id", m.id},
              {"operator", to_json(m.descriptor)},
              {"incompetent", m.incompetent()}};
    if (m.incompetent()) j["reason"] = m.incompetent_reason;
    auto it = qasm_paths.find(m.id);
    j["qasm"] = it == qasm_paths.end() ? json(nullptr) : json(it->second);
    out += j.dump() + '\n';
  }
  for (std::size_t i = 0; i < set.discarded.size(); ++i) {
    const DedupRecord& d = set.discarded[i];
    json j = {{"id", d.discarded},
              {"operator", to_json(set.discarded_descriptors.at(i))},
              {"incompetent", false},
              {"qasm", nullptr},
              {"duplicate_of", d.kept},
              {"reason", d.reason}};
    out += j.dump() + '\n';
  }
  return out;
}

void write_report_artifacts(const CampaignResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const json report = report_json(result);
  const json timings = timings_json(result.timings);
  write_text(dir / "report.json", report.dump(2) + "\n");
  write_text(dir / "timings.json", timings.dump(2) + "\n");
  if (!result.report || !result.suite) return;
  write_text(dir / "report.txt", render_text(report, timings));
  write_text(dir / "report.csv", render_csv(report, timings));
  write_text(dir / "kill_matrix.csv", kill_matrix_csv(*result.report, *result.suite));
  write_text(dir / "predictions.csv", predictions_csv(*result.report, *result.suite));
}

}  // namespace qmut
