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

#ifndef OMDP_AGENTS_H_
#define OMDP_AGENTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "omdp/adversary.h"
#include "omdp/equilibrium.h"
#include "omdp/types.h"

namespace omdp {

// One MWU learner over a subset of actions, fed losses bounded by `scale`.
struct ExpertInstance {
  Vector weights;
  std::int64_t round = 1;  // rounds since the last reset
  double scale = 1.0;

  static ExpertInstance Uniform(int size, double scale);
  // μ = (1/scale)·√(8 ln n / round).
  double StepSize() const;
};

// Exponential update w ∝ w·exp(−μ·feedback); advances the round.
ExpertInstance ExpertUpdate(const ExpertInstance& expert,
                            const Vector& feedback);

// Feedback scale 3τ with τ floored at `tau_floor`. Throws ErgodicityError
// when the kernel has no contraction (δ_max = 1).
double ExpertScale(const MdpModel& model, double tau_floor);

// ---- MDP-E ----

struct MdpEState {
  std::vector<ExpertInstance> experts;  // one per state
  StochasticPolicy policy;
};

MdpEState MdpeInit(const MdpModel& model, double tau_floor = 0.5);
StochasticPolicy MdpeNextPolicy(const MdpEState& state);
MdpEState MdpeObserve(const MdpEState& state, const MdpModel& model,
                      const LossVector& loss);

// ---- MDP-OOE ----

enum class LbarMode { kWindow, kTotal };

struct MdpOoeState {
  std::vector<std::vector<int>> sets;   // A^s, in insertion order
  std::vector<ExpertInstance> experts;  // weights aligned with `sets`
  int window = 0;                       // k; 0 before the first BR
  std::int64_t window_start = 0;
  std::int64_t round = 1;
  Vector lbar_sum;
  std::int64_t lbar_count = 0;
  Vector vertex_average;  // stand-in for l̄ before any observation
  LbarMode lbar_mode = LbarMode::kWindow;
  double scale = 1.0;
  double epsilon = 0.0;  // ≤ 0 selects the exact best response
  std::mt19937_64 rng;
  std::optional<StochasticPolicy> policy;

  LossVector Lbar(int num_states, int num_actions) const;
};

MdpOoeState MdpooeInit(const MdpModel& model, const LossSet& losses,
                       std::uint64_t seed, LbarMode mode = LbarMode::kWindow,
                       double epsilon = 0.0, double tau_floor = 0.5);

struct MdpOoeDecision {
  MdpOoeState state;
  StochasticPolicy policy;
  bool window_changed;
};

MdpOoeDecision MdpooeNextPolicy(const MdpOoeState& state,
                                const MdpModel& model);
MdpOoeState MdpooeObserve(const MdpOoeState& state, const MdpModel& model,
                          const LossVector& loss);

// ---- LRC-OMDP ----

struct LrcState {
  StochasticPolicy pi_star;
  OccupancyMeasure d_star;
  double value;
  double beta = 1.0;
  std::optional<LossVector> last_loss;
};

LrcState LrcInit(const EquilibriumSolution& eq, double beta = 1.0);

struct LrcDecision {
  StochasticPolicy policy;
  std::optional<double> alpha;  // even rounds only
};

LrcDecision LrcNextPolicy(const LrcState& state, const MdpModel& model,
                          std::int64_t t);
LrcState LrcObserve(const LrcState& state, const LossVector& loss);

bool LrcStabilityCheck(const MdpModel& model, const StochasticPolicy& pi_star,
                       double value, const LossVector& loss);

// ---- common interface ----

struct AgentConfig {
  std::string kind = "mdpe";  // mdpe | mdpooe | mdpooe_eps | lrc | fixed
  double epsilon = 0.05;
  LbarMode lbar_mode = LbarMode::kWindow;
  double beta = 1.0;
  double tau_floor = 0.5;
  std::uint64_t seed = 0;
  std::optional<std::vector<int>> fixed_policy;  // defaults to π*
};

struct AgentStep {
  StochasticPolicy policy;
  std::optional<int> window;
  std::optional<double> alpha;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentStep NextPolicy(std::int64_t t) = 0;
  virtual void Observe(const LossVector& loss) = 0;
};

// `eq` is required by lrc and by fixed without an explicit policy.
std::unique_ptr<Agent> MakeAgent(const AgentConfig& config,
                                 const MdpModel& model, const LossSet& losses,
                                 const EquilibriumSolution* eq);

}  // namespace omdp

#endif  // OMDP_AGENTS_H_
