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

#include "omdp/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "omdp/errors.h"

namespace omdp {
namespace {

using nlohmann::json;

json Parse(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T Get(const json& doc, const char* key, const char* what) {
  if (!doc.contains(key)) {
    throw ConfigError(std::string(what) + ": missing \"" + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": bad \"" + key + "\": " + e.what());
  }
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

MdpModel ParseModel(std::string_view json_text) {
  const json doc = Parse(json_text, "model document");
  const int num_states = Get<int>(doc, "num_states", "model document");
  const int num_actions = Get<int>(doc, "num_actions", "model document");
  if (num_states <= 0 || num_actions <= 0) {
    throw ConfigError("model document: counts must be positive");
  }
  const auto transition = Get<std::vector<std::vector<std::vector<double>>>>(
      doc, "transition", "model document");
  if (static_cast<int>(transition.size()) != num_states) {
    throw ConfigError("model document: transition needs |S| blocks");
  }
  Matrix kernel(num_states * num_actions, num_states);
  for (int s = 0; s < num_states; ++s) {
    if (static_cast<int>(transition[s].size()) != num_actions) {
      throw ConfigError("model document: transition[" + std::to_string(s) +
                        "] needs |A| rows");
    }
    for (int a = 0; a < num_actions; ++a) {
      if (static_cast<int>(transition[s][a].size()) != num_states) {
        throw ConfigError("model document: transition row has wrong length");
      }
      for (int n = 0; n < num_states; ++n) {
        kernel(PairIndex(s, a, num_actions), n) = transition[s][a][n];
      }
    }
  }
  if (!doc.contains("initial_dist")) {
    return MdpModel(num_states, num_actions, std::move(kernel));
  }
  const auto initial =
      Get<std::vector<double>>(doc, "initial_dist", "model document");
  if (static_cast<int>(initial.size()) != num_states) {
    throw ConfigError("model document: initial_dist needs |S| entries");
  }
  return MdpModel(num_states, num_actions, std::move(kernel),
                  Eigen::Map<const Vector>(initial.data(), num_states));
}

std::string ModelToJson(const MdpModel& model) {
  json transition = json::array();
  for (int s = 0; s < model.num_states(); ++s) {
    json block = json::array();
    for (int a = 0; a < model.num_actions(); ++a) {
      block.push_back(VectorToJson(model.row(s, a).transpose()));
    }
    transition.push_back(std::move(block));
  }
  json doc = {{"num_states", model.num_states()},
              {"num_actions", model.num_actions()},
              {"transition", std::move(transition)},
              {"initial_dist", VectorToJson(model.initial_dist())}};
  return doc.dump(2);
}

LossSet ParseLossSet(std::string_view json_text, int num_states,
                     int num_actions) {
  const json doc = Parse(json_text, "loss document");
  const auto rows =
      Get<std::vector<std::vector<double>>>(doc, "losses", "loss document");
  std::vector<LossVector> vertices;
  vertices.reserve(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != num_states * num_actions) {
      throw ConfigError("loss document: each loss needs |S|·|A| entries");
    }
    vertices.emplace_back(
        num_states, num_actions,
        Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  return LossSet(std::move(vertices));
}

std::string LossSetToJson(const LossSet& losses) {
  json rows = json::array();
  for (const auto& l : losses.vertices()) rows.push_back(VectorToJson(l.values()));
  return json{{"losses", std::move(rows)}}.dump(2);
}

MdpModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadFile(path));
}

LossSet LoadLossSet(const std::filesystem::path& path, int num_states,
                    int num_actions) {
  return ParseLossSet(ReadFile(path), num_states, num_actions);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::string FormatDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace omdp
