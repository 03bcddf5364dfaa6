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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qmut/error.h"
#include "qmut/qasm.h"
#include "qmut/report.h"

namespace qmut {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json base_config() {
  return json::parse(R"({
    "name": "t",
    "dataset": {"source": "blobs",
                "blobs": {"per_class": 20, "features": 3, "classes": 2, "separation": 10},
                "split_seed": 1, "test_size": 10},
    "model": {"feature_map": "ZZFM", "ansatz": "RA"},
    "training": {"iterations": 40},
    "operators": ["directed"],
    "shots": 500,
    "seed": 5
  })");
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qmut_campaign_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = fmt::format("\"{}\" {} > /dev/null 2>&1", QMUT_CLI_PATH, args);
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_config_error(const json& j, const std::string& fragment) {
  try {
    CampaignConfig::from_json(j);
    ADD_FAILURE() << "accepted: " << j.dump();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, ParsesDefaults) {
  const CampaignConfig c = CampaignConfig::from_json(base_config());
  EXPECT_EQ(c.operators.size(), 7u);
  EXPECT_EQ(c.shots, 500u);
  EXPECT_EQ(c.mutation.seed, 5u);
  EXPECT_EQ(c.dataset.test_size, 10);
  EXPECT_FALSE(c.training.seed.has_value());
}

TEST(ConfigTest, RejectsUnknownKeys) {
  json j = base_config();
  j["colour"] = 1;
  expect_config_error(j, "colour");
  j = base_config();
  j["model"]["depth"] = 2;
  expect_config_error(j, "model.depth");
  j = base_config();
  j["dataset"]["blobs"]["noise"] = 2;
  expect_config_error(j, "dataset.blobs.noise");
}

TEST(ConfigTest, RejectsBadValues) {
  json j = base_config();
  j["operators"] = json::array();
  expect_config_error(j, "operators");
  j = base_config();
  j["operators"] = {"XYZ"};
  expect_config_error(j, "XYZ");
  j = base_config();
  j["shots"] = 0;
  expect_config_error(j, "shots");
  j = base_config();
  j["model"]["ansatz"] = "MLP";
  EXPECT_THROW(CampaignConfig::from_json(j), ConfigError);
  j = base_config();
  j["dataset"] = {{"source", "csv"}};
  expect_config_error(j, "dataset.path");
  j = base_config();
  j["training"]["iterations"] = 0;
  expect_config_error(j, "training.iterations");
  j = base_config();
  j["operator_config"] = {{"gate_set", {"h", "toffoli"}}};
  expect_config_error(j, "toffoli");
  j = base_config();
  j["model"]["entanglement"] = "ring";
  expect_config_error(j, "entanglement");
  j = base_config();
  j.erase("model");
  expect_config_error(j, "model");
  j = base_config();
  j["shots"] = "many";
  EXPECT_THROW(CampaignConfig::from_json(j), ConfigError);
}

TEST(ConfigTest, LoadResolvesRelativePaths) {
  const fs::path dir = temp_dir("relative");
  std::ofstream(dir / "data.csv") << "a,b,label\n1,2,0\n";
  json j = base_config();
  j["dataset"] = {{"source", "csv"}, {"path", "data.csv"}};
  std::ofstream(dir / "c.json") << j.dump();
  const CampaignConfig c = CampaignConfig::load(dir / "c.json");
  EXPECT_EQ(fs::path(c.dataset.path), dir / "data.csv");
  EXPECT_THROW(CampaignConfig::load(dir / "missing.json"), ConfigError);
}

TEST(PrepareTest, BlobsSplitAndScaled) {
  const CampaignConfig c = CampaignConfig::from_json(base_config());
  const PreparedData d = prepare_data(c.dataset);
  EXPECT_EQ(d.test.size(), 10u);
  EXPECT_EQ(d.train.size(), 30u);
  for (double v : d.train.samples.data) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 3.141592653589793);
  }
}

TEST(PrepareTest, ImagesResizedAndPca) {
  json j = base_config();
  j["dataset"] = json::parse(R"({"source": "images",
      "images": {"per_class": 10, "height": 12, "width": 12, "classes": 3},
      "preprocess": {"one_vs_rest": 0, "resize": [4, 4]}, "test_size": 5})");
  const PreparedData d = prepare_data(CampaignConfig::from_json(j).dataset);
  EXPECT_EQ(d.train.num_features(), 16u);
  EXPECT_EQ(d.train.num_classes, 2);
  for (double v : d.train.samples.data) EXPECT_LE(v, 1.0);

  j["dataset"]["preprocess"] = {{"pca", 3}};
  const PreparedData p = prepare_data(CampaignConfig::from_json(j).dataset);
  EXPECT_EQ(p.train.num_features(), 3u);
  EXPECT_FALSE(p.train.shape.image);
}

TEST(PrepareTest, AmplitudeModelWidth) {
  json j = base_config();
  j["dataset"]["blobs"]["features"] = 5;
  j["model"] = {{"feature_map", "AE"}, {"ansatz", "RA"}};
  const CampaignConfig c = CampaignConfig::from_json(j);
  const PreparedData d = prepare_data(c.dataset);
  EXPECT_EQ(build_campaign_model(c, d.train).num_qubits(), 3);
}

TEST(ReportTest, Formatting) {
  EXPECT_EQ(format_cell(9, 16), "9/16");
  EXPECT_EQ(format_score(71.5909), "71.59");
  EXPECT_EQ(format_score(std::nullopt), "n/a");
  EXPECT_EQ(format_score(100.0), "100.00");
}

TEST(CampaignTest, InProcessRunAccounting) {
  CampaignConfig c = CampaignConfig::from_json(base_config());
  c.output = temp_dir("inproc").string();
  const CampaignResult r = run_campaign(c, RunOptions{.workers = 2});
  ASSERT_TRUE(r.report.has_value());
  const auto& rep = *r.report;
  EXPECT_EQ(rep.killed + rep.survived + rep.incompetent, rep.total);
  for (const auto& s : rep.operators) {
    EXPECT_EQ(s.killed + s.survived + s.incompetent, s.total);
    EXPECT_EQ(s.total + s.discarded, r.mutations.generated.at(s.op));
    EXPECT_GE(s.total, 1u) << operator_name(s.op);
  }
  EXPECT_TRUE(rep.score.has_value());
  EXPECT_GT(*rep.score, 0.0);
  EXPECT_LE(*rep.score, 100.0);
  EXPECT_GE(r.timings.generation_seconds, 0.0);
  EXPECT_GE(r.timings.evaluation_seconds, 0.0);

  // Every exported QASM file parses and matches the bound export circuit.
  const fs::path qasm = fs::path(c.output) / "qasm" / "t";
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(qasm)) {
    if (!e.is_regular_file()) continue;
    ++files;
    EXPECT_EQ(e.path().extension(), ".qasm");
    EXPECT_NO_THROW(parse_qasm(read(e.path()))) << e.path();
  }
  EXPECT_EQ(files, r.mutations.mutants.size());
  const Mutant& m0 = r.mutations.mutants.front();
  const Circuit bound = export_circuit(m0, r.model, r.weights, r.suite->samples.front());
  EXPECT_EQ(canonical_form(parse_qasm(read(qasm / "APC" / (m0.id + ".qasm")))),
            canonical_form(bound));

  // One manifest line per generated mutant, discarded ones included.
  std::size_t generated = 0;
  for (const auto& [op, n] : r.mutations.generated) generated += n;
  std::istringstream lines(read(fs::path(c.output) / "mutants.jsonl"));
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);) {
    const json rec = json::parse(line);
    EXPECT_TRUE(rec.contains("id"));
    EXPECT_TRUE(rec.contains("incompetent"));
    EXPECT_TRUE(rec.contains("qasm"));
    ++count;
  }
  EXPECT_EQ(count, generated);
}

TEST(CampaignTest, BaselineRowsOnly) {
  json j = base_config();
  j["operators"] = {"baseline"};
  j["operator_config"] = {{"gate_set", {"x", "h", "cx"}}};
  CampaignConfig c = CampaignConfig::from_json(j);
  const CampaignResult r = run_campaign(c, RunOptions{.write_artifacts = false});
  const json rep = report_json(r);
  std::vector<std::string> rows;
  for (const auto& o : rep["operators"]) rows.push_back(o["operator"]);
  EXPECT_EQ(rows, (std::vector<std::string>{"Add", "Delete", "Change", "MeasAdd", "MeasRemove"}));
}

TEST(CampaignTest, StageErrorsNameTheStage) {
  json j = base_config();
  j["dataset"] = {{"source", "csv"}, {"path", "/nonexistent/x.csv"}};
  try {
    run_campaign(CampaignConfig::from_json(j), RunOptions{.write_artifacts = false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("data: ", 0), 0u) << e.what();
  }
}

TEST(CliTest, RunTwiceByteIdentical) {
  const fs::path dir = temp_dir("cli");
  std::ofstream(dir / "c.json") << base_config().dump(2);
  ASSERT_EQ(run_cli(fmt::format("run --config {} --out {} --workers 1", (dir / "c.json").string(),
                                (dir / "a").string())),
            0);
  ASSERT_EQ(run_cli(fmt::format("run --config {} --out {} --workers 3", (dir / "c.json").string(),
                                (dir / "b").string())),
            0);
  for (const char* f : {"report.json", "kill_matrix.csv", "predictions.csv", "mutants.jsonl"}) {
    EXPECT_EQ(read(dir / "a" / f), read(dir / "b" / f)) << f;
  }
  for (const auto& e : fs::recursive_directory_iterator(dir / "a" / "qasm")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), dir / "a");
    EXPECT_EQ(read(e.path()), read(dir / "b" / rel)) << rel;
  }
  for (const char* f : {"report.csv", "report.txt", "timings.json", "model.weights.json"}) {
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  }
  const json rep = json::parse(read(dir / "a" / "report.json"));
  EXPECT_FALSE(rep.dump().find("seconds") != std::string::npos);

  // report re-renders from disk; a different seed changes the report.
  EXPECT_EQ(run_cli(fmt::format("report --out {}", (dir / "a").string())), 0);
  ASSERT_EQ(run_cli(fmt::format("run --config {} --out {} --seed 6", (dir / "c.json").string(),
                                (dir / "c").string())),
            0);
  EXPECT_NE(read(dir / "a" / "report.json"), read(dir / "c" / "report.json"));
}

TEST(CliTest, StagesAndErrors) {
  const fs::path dir = temp_dir("stages");
  std::ofstream(dir / "c.json") << base_config().dump();
  const std::string cfg = (dir / "c.json").string();
  EXPECT_EQ(run_cli(fmt::format("train --config {} --out {}", cfg, (dir / "o").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "model.weights.json"));
  EXPECT_EQ(run_cli(fmt::format("mutate --config {} --out {}", cfg, (dir / "o").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "mutants.jsonl"));
  EXPECT_EQ(run_cli(fmt::format("export-qasm --config {} --out {}", cfg, (dir / "o").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "qasm" / "t" / "APC" / "apc_0000.qasm"));
  EXPECT_EQ(run_cli(fmt::format("evaluate --config {} --out {}", cfg, (dir / "o").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "report.json"));

  json bad = base_config();
  bad["typo"] = true;
  std::ofstream(dir / "bad.json") << bad.dump();
  EXPECT_EQ(run_cli(fmt::format("run --config {}", (dir / "bad.json").string())), 1);
  EXPECT_NE(run_cli("run"), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
}

TEST(CliTest, CompareQasm) {
  const fs::path dir = temp_dir("compare");
  std::ofstream(dir / "bell.qasm") << "OPENQASM 3.0;\nqubit[2] q;\nbit[2] c;\nh q[0];\n"
                                      "cx q[0], q[1];\nc[0] = measure q[0];\nc[1] = measure q[1];\n";
  EXPECT_EQ(run_cli(fmt::format("compare {0} {0}", (dir / "bell.qasm").string())), 0);
  EXPECT_NE(run_cli(fmt::format("compare {} {}", (dir / "bell.qasm").string(),
                                (dir / "missing.qasm").string())),
            0);
}

}  // namespace
}  // namespace qmut
