// Copyright 2026 The omdp Authors
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

#ifndef OMDP_REPORT_H_
#define OMDP_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omdp/equilibrium.h"
#include "omdp/harness.h"

namespace omdp {

// Raw run files: config.json, equilibrium.json, records.csv and, when
// regret was computed, regret.json.
void WriteRunFiles(const std::filesystem::path& dir, const RunConfig& config,
                   const MdpModel& model, const EquilibriumSolution& eq,
                   const std::vector<RoundRecord>& records,
                   const std::optional<RegretReport>& regret);

// Regenerates rounds.csv, regret.csv, convergence.csv and summary.json from
// the raw files. Throws NotFoundError when the run is missing.
RunSummary Report(const std::filesystem::path& dir);

std::string RecordsToCsv(const std::vector<RoundRecord>& records);
std::vector<RoundRecord> ParseRecordsCsv(std::string_view text);

std::string RegretToJson(const RegretReport& regret);
RegretReport ParseRegretJson(std::string_view text);

// {v, d*, π*, l*, duality_gap, supports}.
std::string EquilibriumToJson(const EquilibriumSolution& eq,
                              const std::optional<SupportReport>& supports);

}  // namespace omdp

#endif  // OMDP_REPORT_H_
