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

#ifndef OMDP_IO_H_
#define OMDP_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "omdp/adversary.h"
#include "omdp/types.h"

namespace omdp {

// Model document:
//   {"num_states": S, "num_actions": A,
//    "transition": [[[P(s'|s,a) for s'] for a] for s],
//    "initial_dist": [μ₀(s) for s]}
// "initial_dist" may be omitted (uniform).
MdpModel ParseModel(std::string_view json_text);
std::string ModelToJson(const MdpModel& model);

// Loss document: {"losses": [[l(s,a) row-major over (s,a)], ...]}.
LossSet ParseLossSet(std::string_view json_text, int num_states,
                     int num_actions);
std::string LossSetToJson(const LossSet& losses);

MdpModel LoadModel(const std::filesystem::path& path);
LossSet LoadLossSet(const std::filesystem::path& path, int num_states,
                    int num_actions);

// Throws NotFoundError when the file cannot be opened.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// %.17g, the float format used in every CSV and JSON output.
std::string FormatDouble(double value);

}  // namespace omdp

#endif  // OMDP_IO_H_
