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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "omdp/agents.h"
#include "omdp/errors.h"
#include "omdp/harness.h"
#include "omdp/mdp.h"
#include "test_util.h"

namespace omdp {
namespace {

using testing::RandomLoss;

TEST(ExpertTest, HandUpdate) {
  ExpertInstance e = ExpertInstance::Uniform(2, 1.5);
  Vector fb(2);
  fb << 0.25, -0.25;
  double mu = std::sqrt(8.0 * std::log(2.0)) / 1.5;
  EXPECT_NEAR(e.StepSize(), mu, 1e-15);
  ExpertInstance n = ExpertUpdate(e, fb);
  double a = std::exp(-mu * 0.25), b = std::exp(mu * 0.25);
  EXPECT_NEAR(n.weights[0], a / (a + b), 1e-15);
  EXPECT_EQ(n.round, 2);
  EXPECT_THROW(ExpertInstance::Uniform(0, 1.0), ConfigError);
  EXPECT_THROW(ExpertInstance::Uniform(2, 0.0), ConfigError);
}

TEST(MdpeTest, StartsUniformAndConstantLossKeepsIt) {
  MdpModel m = testing::Model(1);
  MdpEState st = MdpeInit(m);
  EXPECT_EQ(MdpeNextPolicy(st), StochasticPolicy::Uniform(3, 3));
  for (int t = 0; t < 5; ++t) st = MdpeObserve(st, m, testing::ConstantLoss(3, 3, 0.6));
  EXPECT_LE((MdpeNextPolicy(st).probs() - StochasticPolicy::Uniform(3, 3).probs())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(MdpeTest, SingleStateHandEvaluation) {
  MdpModel one = testing::SingleState(3);
  Vector l(3);
  l << 0.1, 0.5, 0.9;
  MdpEState st = MdpeObserve(MdpeInit(one), one, LossVector(1, 3, l));
  // τ = 0 on one state, floored to 0.5: M = 1.5.
  double mu = std::sqrt(8.0 * std::log(3.0)) / 1.5;
  double eta = l.mean();
  Vector w = (-mu * (l.array() - eta)).exp();
  w /= w.sum();
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(st.policy(0, a), w[a], 1e-15);
}

TEST(MdpeTest, SingleStateEqualsPlainMwu) {
  MdpModel one = testing::SingleState(4);
  std::mt19937_64 rng(17);
  MdpEState st = MdpeInit(one);
  Vector w = Vector::Constant(4, 0.25);
  for (int t = 1; t <= 300; ++t) {
    LossVector l = RandomLoss(rng, 1, 4);
    st = MdpeObserve(st, one, l);
    double mu = std::sqrt(8.0 * std::log(4.0) / t) / 1.5;
    w = w.array() * (-mu * l.values().array()).exp();
    w /= w.sum();
    for (int a = 0; a < 4; ++a) ASSERT_NEAR(st.policy(0, a), w[a], 1e-12);
  }
}

TEST(MdpeTest, NonContractingKernelIsErgodicityError) {
  Matrix p(4, 2);
  p << 1, 0, 0, 1, 0, 1, 1, 0;
  EXPECT_THROW(MdpeInit(MdpModel(2, 2, p)), ErgodicityError);
}

TEST(MdpooeTest, FirstRoundOpensWindowWithBestResponse) {
  auto [m, losses] = GenerateInstance(2, 3, 3, 4, 0.1);
  MdpOoeState st = MdpooeInit(m, losses, 2);
  MdpOoeDecision dec = MdpooeNextPolicy(st, m);
  DeterministicPolicy br = BestResponse(m, losses.VertexAverage());
  EXPECT_TRUE(dec.window_changed);
  EXPECT_EQ(dec.state.window, 1);
  EXPECT_EQ(dec.policy, br.ToStochastic());
  for (int s = 0; s < 3; ++s) {
    ASSERT_EQ(dec.state.sets[s].size(), 1u);
    EXPECT_EQ(dec.state.sets[s][0], br[s]);
  }
  // Same l̄ again: BR inside the sets, nothing changes.
  MdpOoeDecision again = MdpooeNextPolicy(dec.state, m);
  EXPECT_FALSE(again.window_changed);
  EXPECT_EQ(again.state.sets, dec.state.sets);
}

TEST(MdpooeTest, ConstantLossLeavesExpertsAndLbarIsMean) {
  auto [m, losses] = GenerateInstance(4, 3, 3, 4, 0.1);
  MdpOoeState st = MdpooeInit(m, losses, 4);
  st = MdpooeNextPolicy(st, m).state;
  auto experts = st.experts;
  MdpOoeState after = MdpooeObserve(st, m, testing::ConstantLoss(3, 3, 0.7));
  for (int s = 0; s < 3; ++s) {
    EXPECT_LE((after.experts[s].weights - experts[s].weights).cwiseAbs().maxCoeff(),
              1e-15);
  }
  std::mt19937_64 rng(4);
  LossVector a = RandomLoss(rng, 3, 3), b = RandomLoss(rng, 3, 3);
  MdpOoeState two = MdpooeObserve(MdpooeObserve(st, m, a), m, b);
  Vector mean = 0.5 * (a.values() + b.values());
  EXPECT_LE((two.Lbar(3, 3).values() - mean).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(MdpooeObserve(MdpooeInit(m, losses, 0), m, a), ConfigError);
}

struct OoeTrace {
  int windows = 0;
  std::vector<StochasticPolicy> policies;
  MdpOoeState final_state;
};

OoeTrace RunOoe(std::uint64_t seed, int T, LbarMode mode, double eps) {
  RunConfig c;
  c.model_seed = c.loss_seed = seed;
  Instance inst = BuildInstance(c);
  MdpOoeState st = MdpooeInit(inst.model, inst.losses, seed, mode, eps);
  Adversary adv = MakeAdversary(c, inst.losses.size());
  OoeTrace trace{0, {}, st};
  for (int t = 1; t <= T; ++t) {
    MdpOoeDecision dec = MdpooeNextPolicy(st, inst.model);
    st = dec.state;
    trace.policies.push_back(dec.policy);
    LossVector l = RealizedLoss(adv.mixture(), inst.losses);
    adv.Observe(inst.losses, OccupancyOfPolicy(inst.model, dec.policy));
    st = MdpooeObserve(st, inst.model, l);
    // Equal set sizes in every state, equal to the window index.
    for (const auto& set : st.sets) {
      EXPECT_EQ(static_cast<int>(set.size()), st.window);
    }
  }
  trace.windows = st.window;
  trace.final_state = st;
  return trace;
}

TEST(MdpooeTest, WindowCountBoundedBothModes) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (LbarMode mode : {LbarMode::kWindow, LbarMode::kTotal}) {
      OoeTrace tr = RunOoe(seed, 5000, mode, 0.0);
      EXPECT_GE(tr.windows, 1);
      EXPECT_LE(tr.windows, 3);
      for (const auto& e : tr.final_state.experts) {
        EXPECT_EQ(e.weights.size(), tr.windows);
      }
    }
  }
}

TEST(MdpooeTest, EpsilonZeroEqualsExactAndEpsilonOneHasOneWindow) {
  auto [m, losses] = GenerateInstance(5, 3, 3, 4, 0.1);
  AgentConfig exact_cfg;
  exact_cfg.kind = "mdpooe";
  exact_cfg.seed = 5;
  AgentConfig eps_cfg = exact_cfg;
  eps_cfg.kind = "mdpooe_eps";
  eps_cfg.epsilon = 0.0;
  auto exact = MakeAgent(exact_cfg, m, losses, nullptr);
  auto zero = MakeAgent(eps_cfg, m, losses, nullptr);
  std::mt19937_64 rng(5);
  for (int t = 1; t <= 300; ++t) {
    AgentStep a = exact->NextPolicy(t);
    AgentStep b = zero->NextPolicy(t);
    ASSERT_EQ(a.policy, b.policy);
    ASSERT_EQ(a.window, b.window);
    LossVector l = RealizedLoss(AdversaryMixture::PointMass(4, static_cast<int>(rng() % 4)), losses);
    exact->Observe(l);
    zero->Observe(l);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(RunOoe(seed, 500, LbarMode::kWindow, 1.0).windows, 1);
  }
}

TEST(MdpooeTest, SaturatedSetsStopGrowing) {
  auto [m, losses] = GenerateInstance(1, 3, 2, 4, 0.1);
  MdpOoeState st = MdpooeInit(m, losses, 1);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    st = MdpooeNextPolicy(st, m).state;
    st = MdpooeObserve(st, m, RandomLoss(rng, 3, 2));
  }
  EXPECT_LE(st.window, 2);
}

class LrcTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto inst = GenerateInstance(7, 3, 3, 4, 0.1);
    model_.emplace(inst.first);
    losses_.emplace(inst.second);
    eq_.emplace(SolveGame(*model_, *losses_));
  }
  // π̂ and its average loss under l.
  std::pair<DeterministicPolicy, double> Hat(const LossVector& l) const {
    BiasSolution b = SolveBias(*model_, eq_->agent_policy, l);
    std::vector<int> acts(3);
    for (int s = 0; s < 3; ++s) {
      int best = 0;
      for (int a = 1; a < 3; ++a) {
        if (b.q(s, a) < b.q(s, best)) best = a;
      }
      acts[s] = best;
    }
    DeterministicPolicy p(acts, 3);
    return {p, AverageLoss(OccupancyOfPolicy(*model_, p.ToStochastic()), l)};
  }
  std::optional<MdpModel> model_;
  std::optional<LossSet> losses_;
  std::optional<EquilibriumSolution> eq_;
};

TEST_F(LrcTest, OddRoundsPlayPiStar) {
  LrcState st = LrcInit(*eq_);
  for (int t : {1, 3, 5}) {
    LrcDecision d = LrcNextPolicy(st, *model_, t);
    EXPECT_EQ(d.policy, eq_->agent_policy);
    EXPECT_FALSE(d.alpha.has_value());
    st = LrcObserve(st, (*losses_)[t % 4]);
  }
  EXPECT_THROW(LrcNextPolicy(LrcInit(*eq_), *model_, 2), ConfigError);
  EXPECT_THROW(LrcInit(*eq_, 0.5), ConfigError);
}

TEST_F(LrcTest, AlphaFormulaAndClamp) {
  LossVector l = (*losses_)[1];
  auto [hat, eta] = Hat(l);
  LrcState st = LrcObserve(LrcInit(*eq_), l);

  st.value = eta;  // η = v → α = 0 → π*
  LrcDecision zero = LrcNextPolicy(st, *model_, 2);
  EXPECT_EQ(*zero.alpha, 0.0);
  EXPECT_EQ(zero.policy, eq_->agent_policy);

  st.value = eta - 0.1;  // η > v → clipped
  EXPECT_EQ(*LrcNextPolicy(st, *model_, 2).alpha, 0.0);

  st.value = eta + 0.2;  // v − η = 0.2, β = 1
  LrcDecision step = LrcNextPolicy(st, *model_, 2);
  EXPECT_NEAR(*step.alpha, 0.2, 1e-12);
  OccupancyMeasure dh = OccupancyOfPolicy(*model_, hat.ToStochastic());
  Vector expect = 0.8 * eq_->agent_occupancy.mass() + 0.2 * dh.mass();
  OccupancyMeasure got = OccupancyOfPolicy(*model_, step.policy);
  EXPECT_LE((got.mass() - expect).cwiseAbs().maxCoeff(), 1e-8);

  st.beta = 2.0;
  EXPECT_NEAR(*LrcNextPolicy(st, *model_, 2).alpha, 0.1, 1e-12);
  st.value = eta + 5.0;
  st.beta = 1.0;
  EXPECT_EQ(*LrcNextPolicy(st, *model_, 2).alpha, 1.0);
}

TEST_F(LrcTest, StabilityAtEquilibrium) {
  LossVector l_star = RealizedLoss(eq_->adversary_mixture, *losses_);
  EXPECT_TRUE(LrcStabilityCheck(*model_, eq_->agent_policy, eq_->value, l_star));
}

TEST(LrcStabilityTest, MatchingPennies) {
  MdpModel one = testing::SingleState(2);
  LossSet mp = testing::MatchingPennies();
  EquilibriumSolution eq = SolveGame(one, mp);
  EXPECT_FALSE(LrcStabilityCheck(one, eq.agent_policy, eq.value, mp[0]));
  EXPECT_TRUE(LrcStabilityCheck(one, eq.agent_policy, eq.value,
                                RealizedLoss(eq.adversary_mixture, mp)));
}

TEST(LrcStabilityTest, StrictImprovementBeatsValue) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto [m, losses] = GenerateInstance(seed, 3, 3, 4, 0.1);
    EquilibriumSolution eq = SolveGame(m, losses);
    std::mt19937_64 rng(seed);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(4);
      for (int i = 0; i < 4; ++i) x[i] = testing::Unit(rng);
      LossVector l = RealizedLoss(AdversaryMixture(x / x.sum()), losses);
      if (LrcStabilityCheck(m, eq.agent_policy, eq.value, l)) continue;
      BiasSolution b = SolveBias(m, eq.agent_policy, l);
      bool strict = false;
      std::vector<int> acts(3);
      for (int s = 0; s < 3; ++s) {
        int best = 0;
        for (int a = 1; a < 3; ++a) {
          if (b.q(s, a) < b.q(s, best)) best = a;
        }
        acts[s] = best;
        double played = eq.agent_policy.probs().row(s).dot(b.q.row(s));
        strict = strict || b.q(s, best) < played - 1e-8;
      }
      if (!strict) continue;
      ++checked;
      double eta = AverageLoss(
          OccupancyOfPolicy(m, DeterministicPolicy(acts, 3).ToStochastic()), l);
      EXPECT_LT(eta, eq.value);
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(MakeAgentTest, KindsAndErrors) {
  auto [m, losses] = GenerateInstance(0, 3, 3, 4, 0.1);
  EquilibriumSolution eq = SolveGame(m, losses);
  AgentConfig c;
  for (const char* kind : {"mdpe", "mdpooe", "mdpooe_eps", "lrc", "fixed"}) {
    c.kind = kind;
    auto agent = MakeAgent(c, m, losses, &eq);
    AgentStep step = agent->NextPolicy(1);
    EXPECT_EQ(step.policy.num_states(), 3);
    agent->Observe(losses[0]);
  }
  c.kind = "lrc";
  EXPECT_THROW(MakeAgent(c, m, losses, nullptr), ConfigError);
  c.kind = "fixed";
  c.fixed_policy = std::vector<int>{0, 1, 2};
  auto fixed = MakeAgent(c, m, losses, nullptr);
  EXPECT_EQ(fixed->NextPolicy(1).policy,
            DeterministicPolicy({0, 1, 2}, 3).ToStochastic());
  c.fixed_policy = std::vector<int>{0, 1};
  EXPECT_THROW(MakeAgent(c, m, losses, nullptr), ConfigError);
  c.kind = "bogus";
  EXPECT_THROW(MakeAgent(c, m, losses, &eq), ConfigError);
}

}  // namespace
}  // namespace omdp
