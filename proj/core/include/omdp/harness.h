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

#ifndef OMDP_HARNESS_H_
#define OMDP_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omdp/adversary.h"
#include "omdp/agents.h"
#include "omdp/equilibrium.h"
#include "omdp/types.h"

namespace omdp {

struct RunConfig {
  // Model source: generated from (model_seed, num_states, num_actions,
  // lambda) unless model_path is set.
  std::uint64_t model_seed = 0;
  int num_states = 3;
  int num_actions = 3;
  double lambda = 0.1;
  std::string model_path;
  // Loss source: generated from (loss_seed, num_vertices) unless loss_path.
  std::uint64_t loss_seed = 0;
  int num_vertices = 4;
  std::string loss_path;

  AgentConfig agent;

  std::string adversary = "mwu";  // mwu | best_response | oblivious
  StepSchedule schedule;
  std::uint64_t adversary_seed = 0;

  std::int64_t horizon = 1000;
  std::string output_dir = "run";

  // Realized losses: exact distribution propagation, or one sampled path.
  bool sampled = false;
  std::uint64_t trajectory_seed = 0;

  // Counterfactual regret: prefix checkpoints (horizon is always added).
  bool compute_regret = true;
  std::vector<std::int64_t> checkpoints;
};

// Strict JSON parse; unknown keys and invalid values raise ConfigError.
RunConfig ParseRunConfig(std::string_view json_text);
std::string RunConfigToJson(const RunConfig& config);
// The config with every seed replaced by `seed`.
RunConfig WithSeed(RunConfig config, std::uint64_t seed);

MdpModel GenerateModel(std::uint64_t seed, int num_states, int num_actions,
                       double lambda);
LossSet GenerateLosses(std::uint64_t seed, int num_states, int num_actions,
                       int num_vertices);
std::pair<MdpModel, LossSet> GenerateInstance(std::uint64_t seed,
                                              int num_states, int num_actions,
                                              int num_vertices, double lambda);

struct Instance {
  MdpModel model;
  LossSet losses;
};
Instance BuildInstance(const RunConfig& config);

Adversary MakeAdversary(const RunConfig& config, int num_vertices);

struct RoundRecord {
  std::int64_t t = 0;
  double stat_loss = 0.0;      // ⟨l_t, d_{π_t}⟩
  double realized_loss = 0.0;  // ⟨l_t, v_t⟩
  double entropy = 0.0;        // of the adversary mixture x_t
  std::optional<int> window;
  std::optional<double> alpha;
  double re_dist = 0.0;  // RE(l*‖x_t)
  double l1_dist = 0.0;  // ‖x_t − l*‖₁
  double eps_avg = 0.0;  // ε-NE certificate of the running averages
  double cum_stat_loss = 0.0;
  double cum_realized_loss = 0.0;
};

// Called once per round after the record is complete.
using RoundObserver =
    std::function<void(const RoundRecord&, const AgentStep&)>;

std::vector<RoundRecord> RunLoop(const RunConfig& config, const MdpModel& model,
                                 const LossSet& losses,
                                 const EquilibriumSolution& eq,
                                 const RoundObserver& observer = {});

struct RegretCheckpoint {
  std::int64_t horizon;
  double actual_stationary;
  double actual_realized;
  int best_stationary_candidate;
  double best_stationary_loss;
  int best_realized_candidate;
  double best_realized_loss;

  double stationary_regret() const {
    return actual_stationary - best_stationary_loss;
  }
  double policy_regret() const { return actual_realized - best_realized_loss; }
};

struct RegretReport {
  std::vector<std::string> candidate_labels;
  std::vector<RegretCheckpoint> checkpoints;     // ascending horizons
  // Per-candidate totals at the last checkpoint.
  std::vector<double> candidate_stationary;
  std::vector<double> candidate_realized;

  double policy_regret() const { return checkpoints.back().policy_regret(); }
  double stationary_regret() const {
    return checkpoints.back().stationary_regret();
  }
};

// Comparator class: every deterministic policy plus π*.
struct Comparator {
  std::string label;
  StochasticPolicy policy;
};
std::vector<Comparator> DefaultComparators(const MdpModel& model,
                                           const EquilibriumSolution& eq,
                                           std::uint64_t limit = 10000);

// Replays the adversary against each fixed comparator and evaluates policy
// regret and its stationary counterpart at every checkpoint.
RegretReport PolicyRegret(const RunConfig& config, const MdpModel& model,
                          const LossSet& losses,
                          const std::vector<RoundRecord>& records,
                          const std::vector<Comparator>& comparators);

double StationaryRegret(const RunConfig& config, const MdpModel& model,
                        const LossSet& losses,
                        const std::vector<RoundRecord>& records,
                        const std::vector<Comparator>& comparators);

struct ConvergenceReport {
  std::vector<std::int64_t> t;
  std::vector<double> eps_avg;
  std::vector<double> re_dist;
  std::vector<double> l1_dist;
  std::vector<double> entropy;
  // First round whose adversary step size is ≤ 1/3 (-1 if never).
  std::int64_t t_prime = -1;
  // RE over odd rounds 2k−1 → 2k+1 with 2k ≥ t' never increases by more
  // than the slack.
  bool re_monotone = true;
  double max_re_increase = 0.0;
  double l1_at_t_prime = 0.0;
  double l1_final = 0.0;
};

ConvergenceReport MakeConvergenceReport(const std::vector<RoundRecord>& records,
                                        const StepSchedule& schedule,
                                        int num_vertices,
                                        double slack = 1e-12);

// Run + persist raw results, then regenerate the report files.
struct RunSummary {
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  double value = 0.0;
  double cum_stat_loss = 0.0;
  double cum_realized_loss = 0.0;
  double stationary_regret = 0.0;
  double policy_regret = 0.0;
  double eps_final = 0.0;
  double l1_final = 0.0;
  int windows = 0;
};

RunSummary ExecuteRun(const RunConfig& config);

// Runs each seed (overriding every seed in the config) under
// <output_dir>/seed_<n>, with `jobs` worker threads, and writes
// <output_dir>/sweep.csv ordered by seed.
std::vector<RunSummary> Sweep(const RunConfig& config, std::uint64_t first_seed,
                              std::uint64_t last_seed, int jobs);

std::string SweepCsv(const std::vector<RunSummary>& runs);

}  // namespace omdp

#endif  // OMDP_HARNESS_H_
