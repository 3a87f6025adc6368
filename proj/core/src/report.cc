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

#include "omdp/report.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "omdp/errors.h"
#include "omdp/io.h"
#include "omdp/mdp.h"

namespace omdp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kRecordsHeader =
    "t,stat_loss,realized_loss,entropy,window,alpha,re_dist,l1_dist,eps_avg,"
    "cum_stat_loss,cum_realized_loss";

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

// JSON has no inf/nan; those become null.
json Number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json EquilibriumJson(const EquilibriumSolution& eq,
                     const std::optional<SupportReport>& supports) {
  const auto& d = eq.agent_occupancy;
  Matrix dm(d.num_states(), d.num_actions());
  for (int s = 0; s < d.num_states(); ++s) {
    for (int a = 0; a < d.num_actions(); ++a) dm(s, a) = d(s, a);
  }
  json out = {{"v", eq.value},
              {"d_star", MatrixToJson(dm)},
              {"pi_star", MatrixToJson(eq.agent_policy.probs())},
              {"l_star", VectorToJson(eq.adversary_mixture.weights())},
              {"duality_gap", eq.duality_gap}};
  if (supports) {
    out["supports"] = {{"agent", supports->agent_support_size},
                       {"adversary", supports->adversary_support_size},
                       {"threshold", supports->threshold}};
  }
  return out;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("malformed number in run file: '" + s + "'");
  }
  return v;
}

std::string Opt(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::string Opt(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

double StationaryBound(const RunConfig& config, double tau, int num_vertices,
                       int num_actions, std::int64_t horizon, int windows) {
  const double T = static_cast<double>(horizon);
  const double adversary_term =
      std::sqrt(T * std::log(static_cast<double>(num_vertices)) / 2.0);
  if (config.agent.kind == "mdpe") {
    return adversary_term +
           3.0 * tau *
               std::sqrt(T * std::log(static_cast<double>(num_actions)) / 2.0);
  }
  if (config.agent.kind == "mdpooe" || config.agent.kind == "mdpooe_eps") {
    const double k = std::max(windows, 1);
    return 3.0 * tau * (std::sqrt(2.0 * T * k * std::log(k)) +
                        k * std::log(k) / 8.0) +
           adversary_term;
  }
  return std::nan("");
}

}  // namespace

std::string RecordsToCsv(const std::vector<RoundRecord>& records) {
  std::string out = std::string(kRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.t) + "," + FormatDouble(r.stat_loss) + "," +
           FormatDouble(r.realized_loss) + "," + FormatDouble(r.entropy) +
           "," + Opt(r.window) + "," + Opt(r.alpha) + "," +
           FormatDouble(r.re_dist) + "," + FormatDouble(r.l1_dist) + "," +
           FormatDouble(r.eps_avg) + "," + FormatDouble(r.cum_stat_loss) +
           "," + FormatDouble(r.cum_realized_loss) + "\n";
  }
  return out;
}

std::vector<RoundRecord> ParseRecordsCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw ConfigError("records.csv has an unexpected header");
  }
  std::vector<RoundRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = SplitCsvLine(line);
    if (f.size() != 11) throw ConfigError("records.csv: wrong field count");
    RoundRecord r;
    r.t = std::stoll(f[0]);
    r.stat_loss = ParseDouble(f[1]);
    r.realized_loss = ParseDouble(f[2]);
    r.entropy = ParseDouble(f[3]);
    if (!f[4].empty()) r.window = std::stoi(f[4]);
    if (!f[5].empty()) r.alpha = ParseDouble(f[5]);
    r.re_dist = ParseDouble(f[6]);
    r.l1_dist = ParseDouble(f[7]);
    r.eps_avg = ParseDouble(f[8]);
    r.cum_stat_loss = ParseDouble(f[9]);
    r.cum_realized_loss = ParseDouble(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string RegretToJson(const RegretReport& regret) {
  json cps = json::array();
  for (const auto& c : regret.checkpoints) {
    cps.push_back({{"horizon", c.horizon},
                   {"actual_stationary", c.actual_stationary},
                   {"actual_realized", c.actual_realized},
                   {"best_stationary_candidate", c.best_stationary_candidate},
                   {"best_stationary_loss", c.best_stationary_loss},
                   {"best_realized_candidate", c.best_realized_candidate},
                   {"best_realized_loss", c.best_realized_loss}});
  }
  json out = {{"candidates", regret.candidate_labels},
              {"candidate_stationary", regret.candidate_stationary},
              {"candidate_realized", regret.candidate_realized},
              {"checkpoints", cps}};
  return out.dump(2) + "\n";
}

RegretReport ParseRegretJson(std::string_view text) {
  try {
    json j = json::parse(text);
    RegretReport r;
    r.candidate_labels = j.at("candidates").get<std::vector<std::string>>();
    r.candidate_stationary =
        j.at("candidate_stationary").get<std::vector<double>>();
    r.candidate_realized = j.at("candidate_realized").get<std::vector<double>>();
    for (const auto& c : j.at("checkpoints")) {
      r.checkpoints.push_back(RegretCheckpoint{
          c.at("horizon").get<std::int64_t>(),
          c.at("actual_stationary").get<double>(),
          c.at("actual_realized").get<double>(),
          c.at("best_stationary_candidate").get<int>(),
          c.at("best_stationary_loss").get<double>(),
          c.at("best_realized_candidate").get<int>(),
          c.at("best_realized_loss").get<double>()});
    }
    if (r.checkpoints.empty()) throw ConfigError("regret.json has no rows");
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed regret.json: ") + e.what());
  }
}

std::string EquilibriumToJson(const EquilibriumSolution& eq,
                              const std::optional<SupportReport>& supports) {
  return EquilibriumJson(eq, supports).dump(2) + "\n";
}

void WriteRunFiles(const fs::path& dir, const RunConfig& config,
                   const MdpModel& model, const EquilibriumSolution& eq,
                   const std::vector<RoundRecord>& records,
                   const std::optional<RegretReport>& regret) {
  fs::create_directories(dir);
  WriteFile(dir / "config.json", RunConfigToJson(config));
  MixingCertificate cert = MixingTimeBound(model);
  json e = EquilibriumJson(eq, std::nullopt);
  e["delta_max"] = cert.delta_max;
  e["tau"] = Number(cert.tau);
  e["tau_effective"] = Number(cert.EffectiveTau(config.agent.tau_floor));
  e["num_states"] = model.num_states();
  e["num_actions"] = model.num_actions();
  WriteFile(dir / "equilibrium.json", e.dump(2) + "\n");
  WriteFile(dir / "records.csv", RecordsToCsv(records));
  if (regret) {
    WriteFile(dir / "regret.json", RegretToJson(*regret));
  } else {
    fs::remove(dir / "regret.json");
  }
}

RunSummary Report(const fs::path& dir) {
  if (!fs::is_directory(dir) || !fs::exists(dir / "records.csv") ||
      !fs::exists(dir / "config.json") ||
      !fs::exists(dir / "equilibrium.json")) {
    throw NotFoundError("no run found in " + dir.string());
  }
  RunConfig config = ParseRunConfig(ReadFile(dir / "config.json"));
  json eq;
  try {
    eq = json::parse(ReadFile(dir / "equilibrium.json"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed equilibrium.json: ") + e.what());
  }
  std::vector<RoundRecord> records =
      ParseRecordsCsv(ReadFile(dir / "records.csv"));
  std::optional<RegretReport> regret;
  if (fs::exists(dir / "regret.json")) {
    regret = ParseRegretJson(ReadFile(dir / "regret.json"));
  }
  const int num_vertices =
      static_cast<int>(eq.at("l_star").size());
  const int num_actions = eq.at("num_actions").get<int>();
  const double tau = eq.at("tau_effective").is_null()
                         ? std::nan("")
                         : eq.at("tau_effective").get<double>();

  // rounds.csv
  std::string rounds =
      "t,stat_loss,realized_loss,eps_avg,window,alpha,re_dist,cum_stat_loss,"
      "cum_realized_loss\n";
  int windows = 0;
  double drift = 0.0;
  for (const auto& r : records) {
    rounds += std::to_string(r.t) + "," + FormatDouble(r.stat_loss) + "," +
              FormatDouble(r.realized_loss) + "," + FormatDouble(r.eps_avg) +
              "," + Opt(r.window) + "," + Opt(r.alpha) + "," +
              FormatDouble(r.re_dist) + "," + FormatDouble(r.cum_stat_loss) +
              "," + FormatDouble(r.cum_realized_loss) + "\n";
    if (r.window) windows = std::max(windows, *r.window);
    drift += std::abs(r.realized_loss - r.stat_loss);
  }
  WriteFile(dir / "rounds.csv", rounds);

  // convergence.csv
  ConvergenceReport conv =
      MakeConvergenceReport(records, config.schedule, num_vertices);
  std::string convergence = "t,eps_avg,re_dist,l1_dist,entropy\n";
  for (size_t i = 0; i < conv.t.size(); ++i) {
    convergence += std::to_string(conv.t[i]) + "," +
                   FormatDouble(conv.eps_avg[i]) + "," +
                   FormatDouble(conv.re_dist[i]) + "," +
                   FormatDouble(conv.l1_dist[i]) + "," +
                   FormatDouble(conv.entropy[i]) + "\n";
  }
  WriteFile(dir / "convergence.csv", convergence);

  // regret.csv
  std::string regret_csv =
      "horizon,actual_stationary,actual_realized,best_stationary_comparator,"
      "best_stationary_loss,stationary_regret,best_policy_comparator,"
      "best_policy_loss,policy_regret,stationary_bound\n";
  json regret_json = nullptr;
  if (regret) {
    for (const auto& c : regret->checkpoints) {
      double bound = StationaryBound(config, tau, num_vertices, num_actions,
                                     c.horizon, windows);
      regret_csv +=
          std::to_string(c.horizon) + "," + FormatDouble(c.actual_stationary) +
          "," + FormatDouble(c.actual_realized) + "," +
          regret->candidate_labels[static_cast<size_t>(
              c.best_stationary_candidate)] +
          "," + FormatDouble(c.best_stationary_loss) + "," +
          FormatDouble(c.stationary_regret()) + "," +
          regret->candidate_labels[static_cast<size_t>(
              c.best_realized_candidate)] +
          "," + FormatDouble(c.best_realized_loss) + "," +
          FormatDouble(c.policy_regret()) + "," +
          (std::isnan(bound) ? std::string() : FormatDouble(bound)) + "\n";
    }
    const auto& last = regret->checkpoints.back();
    double bound = StationaryBound(config, tau, num_vertices, num_actions,
                                   last.horizon, windows);
    regret_json = {
        {"comparator_class", "deterministic policies + pi_star"},
        {"policy_regret", last.policy_regret()},
        {"policy_comparator",
         regret->candidate_labels[static_cast<size_t>(
             last.best_realized_candidate)]},
        {"stationary_regret", last.stationary_regret()},
        {"stationary_comparator",
         regret->candidate_labels[static_cast<size_t>(
             last.best_stationary_candidate)]},
        {"stationary_bound", Number(bound)},
        {"within_bound", std::isnan(bound)
                             ? json(nullptr)
                             : json(last.stationary_regret() <= bound)}};
  }
  WriteFile(dir / "regret.csv", regret_csv);

  RunSummary s;
  s.seed = config.model_seed;
  s.horizon = static_cast<std::int64_t>(records.size());
  s.value = eq.at("v").get<double>();
  if (!records.empty()) {
    s.cum_stat_loss = records.back().cum_stat_loss;
    s.cum_realized_loss = records.back().cum_realized_loss;
    s.eps_final = records.back().eps_avg;
    s.l1_final = records.back().l1_dist;
  }
  if (regret) {
    s.stationary_regret = regret->stationary_regret();
    s.policy_regret = regret->policy_regret();
  } else {
    s.stationary_regret = std::nan("");
    s.policy_regret = std::nan("");
  }
  s.windows = windows;

  json summary = {
      {"agent", config.agent.kind},
      {"adversary", config.adversary},
      {"horizon", s.horizon},
      {"seed", s.seed},
      {"value", s.value},
      {"duality_gap", eq.at("duality_gap")},
      {"delta_max", eq.at("delta_max")},
      {"tau", eq.at("tau")},
      {"tau_effective", eq.at("tau_effective")},
      {"realized", config.sampled ? "sampled" : "expected"},
      {"cum_stat_loss", s.cum_stat_loss},
      {"cum_realized_loss", s.cum_realized_loss},
      {"drift", drift},
      {"eps_final", s.eps_final},
      {"regret", regret_json},
      {"convergence",
       {{"t_prime", conv.t_prime},
        {"re_monotone", conv.re_monotone},
        {"max_re_increase", Number(conv.max_re_increase)},
        {"l1_at_t_prime", Number(conv.l1_at_t_prime)},
        {"l1_final", Number(conv.l1_final)}}}};
  if (config.agent.kind == "mdpooe" || config.agent.kind == "mdpooe_eps") {
    summary["windows"] = windows;
    summary["lbar_mode"] =
        config.agent.lbar_mode == LbarMode::kWindow ? "window" : "total";
  }
  if (config.agent.kind == "mdpooe_eps") summary["epsilon"] = config.agent.epsilon;
  WriteFile(dir / "summary.json", summary.dump(2) + "\n");
  return s;
}

}  // namespace omdp
