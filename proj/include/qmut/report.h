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

#ifndef QMUT_REPORT_H_
#define QMUT_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qmut/campaign.h"
#include "qmut/oracle.h"

namespace qmut {

/// "9/16".
std::string format_cell(std::size_t killed, std::size_t total);
/// Two decimals, or "n/a" when the score is undefined.
std::string format_score(std::optional<double> score);

/// Everything except wall-clock timings, so equal seeds give equal bytes.
nlohmann::json report_json(const CampaignResult& result);
nlohmann::json timings_json(const Timings& timings);

/// Human-readable summary table plus per-operator breakdown. `timings` may
/// be null.
std::string render_text(const nlohmann::json& report, const nlohmann::json& timings);
/// One row per (dataset, feature map, ansatz) with full-precision values.
std::string render_csv(const nlohmann::json& report, const nlohmann::json& timings);

/// Rows are mutants, columns suite samples; cells K or S, and I across the
/// row of an incompetent mutant.
std::string kill_matrix_csv(const CampaignReport& report, const TestSuite& suite);
/// One row per suite sample: id, true label, original prediction, then the
/// prediction of every evaluated mutant.
std::string predictions_csv(const CampaignReport& report, const TestSuite& suite);
/// One JSON record per generated mutant: id, operator descriptor, incompetent
/// flag, qasm path (null when not exported), duplicate_of for discards.
std::string mutants_jsonl(const MutationSet& set,
                          const std::map<std::string, std::string>& qasm_paths);

/// report.json, timings.json, report.txt, report.csv, kill_matrix.csv and
/// predictions.csv.
void write_report_artifacts(const CampaignResult& result,
                            const std::filesystem::path& dir);

}  // namespace qmut

#endif  // QMUT_REPORT_H_
