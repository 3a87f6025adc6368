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

#include "omdp/agents.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "omdp/errors.h"
#include "omdp/mdp.h"

namespace omdp {
namespace {

Matrix PolicyFromSets(const std::vector<std::vector<int>>& sets,
                      const std::vector<ExpertInstance>& experts,
                      int num_actions) {
  const int S = static_cast<int>(sets.size());
  Matrix probs = Matrix::Zero(S, num_actions);
  for (int s = 0; s < S; ++s) {
    const auto& set = sets[static_cast<size_t>(s)];
    const Vector& w = experts[static_cast<size_t>(s)].weights;
    for (size_t j = 0; j < set.size(); ++j) {
      probs(s, set[j]) = w[static_cast<Eigen::Index>(j)];
    }
  }
  return probs;
}

bool Contains(const std::vector<int>& set, int a) {
  return std::find(set.begin(), set.end(), a) != set.end();
}

int ArgminRow(const Matrix& q, int s) {
  int best = 0;
  for (int a = 1; a < q.cols(); ++a) {
    if (q(s, a) < q(s, best)) best = a;
  }
  return best;
}

// Grows every unsaturated A^s by one action and opens a new window.
void Expand(MdpOoeState& st, const DeterministicPolicy& br, int num_actions) {
  const int S = static_cast<int>(st.sets.size());
  for (int s = 0; s < S; ++s) {
    auto& set = st.sets[static_cast<size_t>(s)];
    if (static_cast<int>(set.size()) == num_actions) continue;
    if (!Contains(set, br[s])) {
      set.push_back(br[s]);
      continue;
    }
    std::vector<int> missing;
    for (int a = 0; a < num_actions; ++a) {
      if (!Contains(set, a)) missing.push_back(a);
    }
    set.push_back(missing[st.rng() % missing.size()]);
  }
  ++st.window;
  st.window_start = st.round;
  for (int s = 0; s < S; ++s) {
    st.experts[static_cast<size_t>(s)] = ExpertInstance::Uniform(
        static_cast<int>(st.sets[static_cast<size_t>(s)].size()), st.scale);
  }
  if (st.lbar_mode == LbarMode::kWindow) {
    st.lbar_sum.setZero();
    st.lbar_count = 0;
  }
}

}  // namespace

ExpertInstance ExpertInstance::Uniform(int size, double scale) {
  if (size < 1 || !(scale > 0.0)) {
    throw ConfigError("expert needs at least one action and a positive scale");
  }
  return ExpertInstance{Vector::Constant(size, 1.0 / size), 1, scale};
}

double ExpertInstance::StepSize() const {
  const double n = static_cast<double>(weights.size());
  return std::sqrt(8.0 * std::log(n) / static_cast<double>(round)) / scale;
}

ExpertInstance ExpertUpdate(const ExpertInstance& expert,
                            const Vector& feedback) {
  const double mu = expert.StepSize();
  Vector logits = -mu * feedback;
  logits.array() -= logits.maxCoeff();
  Vector w = expert.weights.array() * logits.array().exp();
  return ExpertInstance{w / w.sum(), expert.round + 1, expert.scale};
}

double ExpertScale(const MdpModel& model, double tau_floor) {
  MixingCertificate cert = MixingTimeBound(model);
  if (!cert.bounded()) {
    throw ErgodicityError("transition kernel has delta_max = 1; tau unbounded");
  }
  return 3.0 * cert.EffectiveTau(tau_floor);
}

// ---- MDP-E ----

MdpEState MdpeInit(const MdpModel& model, double tau_floor) {
  const double scale = ExpertScale(model, tau_floor);
  std::vector<ExpertInstance> experts(
      static_cast<size_t>(model.num_states()),
      ExpertInstance::Uniform(model.num_actions(), scale));
  return MdpEState{std::move(experts),
                   StochasticPolicy::Uniform(model.num_states(),
                                             model.num_actions())};
}

StochasticPolicy MdpeNextPolicy(const MdpEState& state) {
  return state.policy;
}

MdpEState MdpeObserve(const MdpEState& state, const MdpModel& model,
                      const LossVector& loss) {
  BiasSolution bias = SolveBias(model, state.policy, loss);
  const int S = model.num_states();
  MdpEState next{state.experts, state.policy};
  Matrix probs(S, model.num_actions());
  for (int s = 0; s < S; ++s) {
    auto& e = next.experts[static_cast<size_t>(s)];
    e = ExpertUpdate(e, bias.q.row(s).transpose());
    probs.row(s) = e.weights.transpose();
  }
  next.policy = StochasticPolicy(std::move(probs));
  return next;
}

// ---- MDP-OOE ----

LossVector MdpOoeState::Lbar(int num_states, int num_actions) const {
  if (lbar_count == 0) return LossVector(num_states, num_actions, vertex_average);
  return LossVector(num_states, num_actions,
                    lbar_sum / static_cast<double>(lbar_count));
}

MdpOoeState MdpooeInit(const MdpModel& model, const LossSet& losses,
                       std::uint64_t seed, LbarMode mode, double epsilon,
                       double tau_floor) {
  MdpOoeState st;
  const auto S = static_cast<size_t>(model.num_states());
  st.sets.assign(S, {});
  st.scale = ExpertScale(model, tau_floor);
  st.experts.assign(S, ExpertInstance{Vector(), 1, st.scale});
  st.lbar_sum = Vector::Zero(model.num_pairs());
  st.vertex_average = losses.VertexAverage().values();
  st.lbar_mode = mode;
  st.epsilon = epsilon;
  st.rng.seed(seed);
  return st;
}

MdpOoeDecision MdpooeNextPolicy(const MdpOoeState& state,
                                const MdpModel& model) {
  const int S = model.num_states();
  const int A = model.num_actions();
  MdpOoeState st = state;
  LossVector lbar = st.Lbar(S, A);

  bool expand = false;
  std::optional<DeterministicPolicy> br;
  if (st.epsilon > 0.0) {
    EpsilonBestResponseResult r =
        SolveEpsilonBestResponse(model, lbar, st.epsilon);
    if (st.window == 0) {
      expand = true;
    } else {
      // Accept when the best policy inside the sets is already ε-optimal.
      ActionMask mask(static_cast<size_t>(S),
                      std::vector<bool>(static_cast<size_t>(A), false));
      for (int s = 0; s < S; ++s) {
        for (int a : st.sets[static_cast<size_t>(s)]) {
          mask[static_cast<size_t>(s)][static_cast<size_t>(a)] = true;
        }
      }
      DeterministicPolicy inside = BestResponse(model, lbar, mask);
      double eta = AverageLoss(OccupancyOfPolicy(model, inside.ToStochastic()),
                               lbar);
      expand = eta > r.lower_bound + st.epsilon;
    }
    br = r.policy;
  } else {
    br = BestResponse(model, lbar);
    for (int s = 0; s < S && !expand; ++s) {
      expand = !Contains(st.sets[static_cast<size_t>(s)], (*br)[s]);
    }
  }
  if (expand) Expand(st, *br, A);

  StochasticPolicy policy(PolicyFromSets(st.sets, st.experts, A));
  st.policy = policy;
  return MdpOoeDecision{std::move(st), std::move(policy), expand};
}

MdpOoeState MdpooeObserve(const MdpOoeState& state, const MdpModel& model,
                          const LossVector& loss) {
  if (!state.policy) {
    throw ConfigError("mdpooe_observe called before mdpooe_next_policy");
  }
  MdpOoeState st = state;
  st.lbar_sum += loss.values();
  ++st.lbar_count;
  BiasSolution bias = SolveBias(model, *st.policy, loss);
  for (int s = 0; s < model.num_states(); ++s) {
    const auto& set = st.sets[static_cast<size_t>(s)];
    Vector feedback(static_cast<Eigen::Index>(set.size()));
    for (size_t j = 0; j < set.size(); ++j) {
      feedback[static_cast<Eigen::Index>(j)] = bias.q(s, set[j]);
    }
    auto& e = st.experts[static_cast<size_t>(s)];
    e = ExpertUpdate(e, feedback);
  }
  ++st.round;
  return st;
}

// ---- LRC-OMDP ----

LrcState LrcInit(const EquilibriumSolution& eq, double beta) {
  if (!(beta >= 1.0)) throw ConfigError("lrc beta must be >= 1");
  return LrcState{eq.agent_policy, eq.agent_occupancy, eq.value, beta,
                  std::nullopt};
}

LrcDecision LrcNextPolicy(const LrcState& state, const MdpModel& model,
                          std::int64_t t) {
  if (t % 2 == 1) return LrcDecision{state.pi_star, std::nullopt};
  if (!state.last_loss) {
    throw ConfigError("lrc even round without an observed loss");
  }
  const LossVector& l = *state.last_loss;
  BiasSolution bias = SolveBias(model, state.pi_star, l);
  std::vector<int> actions(static_cast<size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) {
    actions[static_cast<size_t>(s)] = ArgminRow(bias.q, s);
  }
  DeterministicPolicy hat(std::move(actions), model.num_actions());
  OccupancyMeasure d_hat = OccupancyOfPolicy(model, hat.ToStochastic());
  double eta = AverageLoss(d_hat, l);
  double alpha = std::clamp((state.value - eta) / state.beta, 0.0, 1.0);
  if (alpha == 0.0) return LrcDecision{state.pi_star, alpha};
  OccupancyMeasure mixed(model.num_states(), model.num_actions(),
                         (1.0 - alpha) * state.d_star.mass() +
                             alpha * d_hat.mass());
  return LrcDecision{PolicyOfOccupancy(model, mixed), alpha};
}

LrcState LrcObserve(const LrcState& state, const LossVector& loss) {
  LrcState next = state;
  next.last_loss = loss;
  return next;
}

bool LrcStabilityCheck(const MdpModel& model, const StochasticPolicy& pi_star,
                       double value, const LossVector& loss) {
  constexpr double kTol = 1e-8;
  BiasSolution bias = SolveBias(model, pi_star, loss);
  for (int s = 0; s < model.num_states(); ++s) {
    double played = pi_star.probs().row(s).dot(bias.q.row(s));
    if (played - bias.q.row(s).minCoeff() > kTol) return false;
  }
  return std::abs(bias.eta - value) <= kTol;
}

// ---- common interface ----

namespace {

class MdpeAgent : public Agent {
 public:
  MdpeAgent(const MdpModel& model, double tau_floor)
      : model_(model), state_(MdpeInit(model, tau_floor)) {}
  AgentStep NextPolicy(std::int64_t) override {
    return AgentStep{MdpeNextPolicy(state_), std::nullopt, std::nullopt};
  }
  void Observe(const LossVector& loss) override {
    state_ = MdpeObserve(state_, model_, loss);
  }

 private:
  const MdpModel& model_;
  MdpEState state_;
};

class MdpooeAgent : public Agent {
 public:
  MdpooeAgent(const MdpModel& model, MdpOoeState state)
      : model_(model), state_(std::move(state)) {}
  AgentStep NextPolicy(std::int64_t) override {
    MdpOoeDecision dec = MdpooeNextPolicy(state_, model_);
    state_ = std::move(dec.state);
    return AgentStep{std::move(dec.policy), state_.window, std::nullopt};
  }
  void Observe(const LossVector& loss) override {
    state_ = MdpooeObserve(state_, model_, loss);
  }

 private:
  const MdpModel& model_;
  MdpOoeState state_;
};

class LrcAgent : public Agent {
 public:
  LrcAgent(const MdpModel& model, LrcState state)
      : model_(model), state_(std::move(state)) {}
  AgentStep NextPolicy(std::int64_t t) override {
    LrcDecision dec = LrcNextPolicy(state_, model_, t);
    return AgentStep{std::move(dec.policy), std::nullopt, dec.alpha};
  }
  void Observe(const LossVector& loss) override {
    state_ = LrcObserve(state_, loss);
  }

 private:
  const MdpModel& model_;
  LrcState state_;
};

class FixedAgent : public Agent {
 public:
  explicit FixedAgent(StochasticPolicy policy) : policy_(std::move(policy)) {}
  AgentStep NextPolicy(std::int64_t) override {
    return AgentStep{policy_, std::nullopt, std::nullopt};
  }
  void Observe(const LossVector&) override {}

 private:
  StochasticPolicy policy_;
};

}  // namespace

std::unique_ptr<Agent> MakeAgent(const AgentConfig& config,
                                 const MdpModel& model, const LossSet& losses,
                                 const EquilibriumSolution* eq) {
  const std::string& kind = config.kind;
  if (kind == "mdpe") {
    return std::make_unique<MdpeAgent>(model, config.tau_floor);
  }
  if (kind == "mdpooe" || kind == "mdpooe_eps") {
    double eps = kind == "mdpooe_eps" ? config.epsilon : 0.0;
    return std::make_unique<MdpooeAgent>(
        model, MdpooeInit(model, losses, config.seed, config.lbar_mode, eps,
                          config.tau_floor));
  }
  if (kind == "lrc") {
    if (eq == nullptr) throw ConfigError("lrc agent needs an equilibrium");
    return std::make_unique<LrcAgent>(model, LrcInit(*eq, config.beta));
  }
  if (kind == "fixed") {
    if (config.fixed_policy) {
      DeterministicPolicy p(*config.fixed_policy, model.num_actions());
      if (p.num_states() != model.num_states()) {
        throw ConfigError("fixed_policy length does not match num_states");
      }
      return std::make_unique<FixedAgent>(p.ToStochastic());
    }
    if (eq == nullptr) throw ConfigError("fixed agent needs a policy or an equilibrium");
    return std::make_unique<FixedAgent>(eq->agent_policy);
  }
  throw ConfigError("unknown agent kind: " + kind);
}

}  // namespace omdp
