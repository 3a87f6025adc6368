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
#include <filesystem>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "omdp/errors.h"
#include "omdp/harness.h"
#include "omdp/io.h"
#include "omdp/mdp.h"
#include "omdp/report.h"
#include "test_util.h"

namespace omdp {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("omdp_harness_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(RunConfigTest, DefaultsAndRoundTrip) {
  RunConfig c = ParseRunConfig("{}");
  EXPECT_EQ(c.num_states, 3);
  EXPECT_EQ(c.num_vertices, 4);
  EXPECT_EQ(c.agent.kind, "mdpe");
  EXPECT_EQ(c.adversary, "mwu");
  EXPECT_TRUE(std::isinf(c.schedule.cap));

  RunConfig lrc = ParseRunConfig(R"({"agent":{"kind":"lrc"},"horizon":10})");
  EXPECT_EQ(lrc.schedule.cap, 1.0 / 3.0);
  EXPECT_EQ(lrc.schedule.horizon, 10);

  RunConfig full = ParseRunConfig(R"({
    "model": {"seed": 7, "num_states": 2, "num_actions": 4, "lambda": 0.3},
    "losses": {"seed": 8, "num_vertices": 5},
    "agent": {"kind": "mdpooe_eps", "epsilon": 0.1, "lbar_mode": "total",
              "tau_floor": 0.7, "seed": 9},
    "adversary": {"kind": "oblivious", "schedule": "fixed_horizon",
                  "cap": 0.5, "seed": 10},
    "horizon": 50, "output_dir": "x", "realized": "sampled",
    "trajectory_seed": 11, "regret": {"enabled": false, "checkpoints": [10]}
  })");
  RunConfig again = ParseRunConfig(RunConfigToJson(full));
  EXPECT_EQ(RunConfigToJson(again), RunConfigToJson(full));
  EXPECT_EQ(again.loss_seed, 8u);
  EXPECT_EQ(again.agent.lbar_mode, LbarMode::kTotal);
  EXPECT_TRUE(again.sampled);
  EXPECT_EQ(again.schedule.kind, StepSchedule::Kind::kFixedHorizon);

  RunConfig seeded = WithSeed(full, 99);
  EXPECT_EQ(seeded.model_seed, 99u);
  EXPECT_EQ(seeded.loss_seed, 99u);
  EXPECT_EQ(seeded.agent.seed, 99u);
  EXPECT_EQ(seeded.adversary_seed, 99u);
}

TEST(RunConfigTest, RejectsInvalidDocuments) {
  for (const char* bad :
       {"{", "[]", R"({"horizn": 3})", R"({"horizon": 0})",
        R"({"model": {"lambda": 0}})", R"({"model": {"lambda": 1.5}})",
        R"({"agent": {"kind": "nope"}})", R"({"adversary": {"kind": "x"}})",
        R"({"agent": {"lbar_mode": "sometimes"}})",
        R"({"horizon": "ten"})", R"({"regret": {"checkpoints": [0]}})",
        R"({"realized": "maybe"})"}) {
    EXPECT_THROW(ParseRunConfig(bad), ConfigError) << bad;
  }
}

TEST(GenerateInstanceTest, DeterministicAndMixing) {
  auto [m1, l1] = GenerateInstance(3, 3, 3, 4, 0.1);
  auto [m2, l2] = GenerateInstance(3, 3, 3, 4, 0.1);
  EXPECT_EQ(m1.transition(), m2.transition());
  EXPECT_EQ(l1.AsMatrix(), l2.AsMatrix());
  auto [m3, l3] = GenerateInstance(4, 3, 3, 4, 0.1);
  EXPECT_NE(m1.transition(), m3.transition());

  auto [u, lu] = GenerateInstance(0, 3, 2, 2, 1.0);
  EXPECT_LE(MixingTimeBound(u).delta_max, 1e-15);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto [m, l] = GenerateInstance(seed, 3, 3, 4, 0.1);
    EXPECT_LE(MixingTimeBound(m).delta_max, 0.9 + 1e-12);
  }
  EXPECT_THROW(GenerateInstance(0, 0, 3, 4, 0.1), ConfigError);
  EXPECT_THROW(GenerateInstance(0, 3, 3, 4, 0.0), ConfigError);
}

TEST(RunLoopTest, SingleRoundFixedAgentOblivious) {
  RunConfig c = ParseRunConfig(
      R"({"agent":{"kind":"fixed","policy":[0,1,2]},
          "adversary":{"kind":"oblivious","seed":3},"horizon":1})");
  Instance inst = BuildInstance(c);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  auto recs = RunLoop(c, inst.model, inst.losses, eq);
  ASSERT_EQ(recs.size(), 1u);
  Adversary adv = MakeAdversary(c, 4);
  LossVector l = RealizedLoss(adv.mixture(), inst.losses);
  StochasticPolicy pi = DeterministicPolicy({0, 1, 2}, 3).ToStochastic();
  double expect = 0.0;
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 3; ++a) {
      expect += inst.model.initial_dist()[s] * pi(s, a) * l(s, a);
    }
  }
  EXPECT_NEAR(recs[0].realized_loss, expect, 1e-15);
  EXPECT_NEAR(recs[0].stat_loss,
              AverageLoss(OccupancyOfPolicy(inst.model, pi), l), 1e-15);
}

TEST(RunLoopTest, RecordsAreBoundedAndMonotone) {
  for (const char* kind : {"mdpe", "mdpooe", "lrc"}) {
    RunConfig c = ParseRunConfig(std::string(R"({"agent":{"kind":")") + kind +
                                 R"("},"horizon":300})");
    Instance inst = BuildInstance(c);
    EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
    auto recs = RunLoop(c, inst.model, inst.losses, eq);
    double prev_s = 0.0, prev_r = 0.0;
    for (const auto& r : recs) {
      EXPECT_GE(r.stat_loss, 0.0);
      EXPECT_LE(r.stat_loss, 1.0);
      EXPECT_GE(r.realized_loss, 0.0);
      EXPECT_LE(r.realized_loss, 1.0);
      EXPECT_GE(r.cum_stat_loss, prev_s);
      EXPECT_GE(r.cum_realized_loss, prev_r);
      EXPECT_GE(r.eps_avg, 0.0);
      prev_s = r.cum_stat_loss;
      prev_r = r.cum_realized_loss;
    }
    EXPECT_EQ(recs[0].window.has_value(), std::string(kind) == "mdpooe");
    EXPECT_EQ(recs[1].alpha.has_value(), std::string(kind) == "lrc");
  }
}

TEST(RunLoopTest, SampledModeStaysInRange) {
  RunConfig c = ParseRunConfig(R"({"realized":"sampled","horizon":200})");
  Instance inst = BuildInstance(c);
  auto recs = RunLoop(c, inst.model, inst.losses, SolveGame(inst.model, inst.losses));
  for (const auto& r : recs) {
    EXPECT_GE(r.realized_loss, 0.0);
    EXPECT_LE(r.realized_loss, 1.0);
  }
}

TEST(RunLoopTest, DeterministicGivenSeeds) {
  RunConfig c = ParseRunConfig(R"({"agent":{"kind":"mdpooe"},"horizon":400})");
  Instance inst = BuildInstance(c);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  EXPECT_EQ(RecordsToCsv(RunLoop(c, inst.model, inst.losses, eq)),
            RecordsToCsv(RunLoop(c, inst.model, inst.losses, eq)));
}

TEST(RegretTest, FixedBestComparatorHasZeroRegret) {
  RunConfig c = ParseRunConfig(R"({"agent":{"kind":"fixed","policy":[0,0,0]},
                                   "horizon":500})");
  Instance inst = BuildInstance(c);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  auto comps = DefaultComparators(inst.model, eq);
  ASSERT_EQ(comps.size(), 28u);
  RegretReport probe = PolicyRegret(c, inst.model, inst.losses,
                                    RunLoop(c, inst.model, inst.losses, eq), comps);
  const auto& best = comps[static_cast<size_t>(
      probe.checkpoints.back().best_realized_candidate)];
  if (best.label == "pi_star") {
    c.agent.fixed_policy.reset();
  } else {
    std::vector<int> acts;
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 3; ++a) {
        if (best.policy(s, a) == 1.0) acts.push_back(a);
      }
    }
    c.agent.fixed_policy = acts;
  }
  auto recs = RunLoop(c, inst.model, inst.losses, eq);
  RegretReport r = PolicyRegret(c, inst.model, inst.losses, recs, comps);
  EXPECT_NEAR(r.policy_regret(), 0.0, 1e-9);
}

TEST(RegretTest, EmptyPrefixAndCheckpoints) {
  RunConfig c = ParseRunConfig(
      R"({"horizon":200,"regret":{"checkpoints":[50,100]}})");
  Instance inst = BuildInstance(c);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  auto recs = RunLoop(c, inst.model, inst.losses, eq);
  auto comps = DefaultComparators(inst.model, eq);
  RegretReport r = PolicyRegret(c, inst.model, inst.losses, recs, comps);
  ASSERT_EQ(r.checkpoints.size(), 3u);
  EXPECT_EQ(r.checkpoints[0].horizon, 50);
  EXPECT_EQ(r.checkpoints[2].horizon, 200);
  EXPECT_NEAR(StationaryRegret(c, inst.model, inst.losses, recs, comps),
              r.stationary_regret(), 0.0);
  RegretReport empty = PolicyRegret(c, inst.model, inst.losses, {}, comps);
  EXPECT_EQ(empty.policy_regret(), 0.0);
  EXPECT_EQ(empty.stationary_regret(), 0.0);
}

TEST(RegretTest, MdpeRegretPerRoundDecreases) {
  RunConfig c = ParseRunConfig(
      R"({"horizon":32000,"regret":{"checkpoints":[2000,8000]}})");
  Instance inst = BuildInstance(c);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  auto recs = RunLoop(c, inst.model, inst.losses, eq);
  RegretReport r = PolicyRegret(c, inst.model, inst.losses, recs,
                                DefaultComparators(inst.model, eq));
  double prev = 1e9;
  for (const auto& cp : r.checkpoints) {
    double per_round = cp.policy_regret() / static_cast<double>(cp.horizon);
    EXPECT_LT(per_round, prev);
    prev = per_round;
  }
}

TEST(ConvergenceTest, MonotoneVerdict) {
  std::vector<RoundRecord> recs(7);
  double re[] = {5.0, 9.0, 4.0, 9.0, 3.0, 0.1, 3.5};
  for (int i = 0; i < 7; ++i) {
    recs[i].t = i + 1;
    recs[i].re_dist = re[i];
    recs[i].l1_dist = re[i] / 10;
  }
  StepSchedule capped{StepSchedule::Kind::kAnytime, 0, 1.0 / 3.0};
  ConvergenceReport ok = MakeConvergenceReport(recs, capped, 4);
  EXPECT_EQ(ok.t_prime, 1);
  EXPECT_FALSE(ok.re_monotone);  // 3.0 → 3.5 on rounds 5 → 7
  EXPECT_NEAR(ok.max_re_increase, 0.5, 1e-15);
  recs[6].re_dist = 2.0;
  EXPECT_TRUE(MakeConvergenceReport(recs, capped, 4).re_monotone);
  EXPECT_DOUBLE_EQ(MakeConvergenceReport(recs, capped, 4).l1_at_t_prime, 0.5);
}

TEST(ReportTest, WritesSchemaAndIsIdempotent) {
  fs::path dir = TempDir("report");
  RunConfig c = ParseRunConfig(R"({"agent":{"kind":"mdpooe"},"horizon":300})");
  c.output_dir = dir.string();
  RunSummary s = ExecuteRun(c);
  EXPECT_EQ(s.horizon, 300);
  for (const char* f : {"summary.json", "rounds.csv", "regret.csv",
                        "convergence.csv", "config.json", "records.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::string rounds = ReadFile(dir / "rounds.csv");
  EXPECT_EQ(rounds.substr(0, rounds.find('\n')),
            "t,stat_loss,realized_loss,eps_avg,window,alpha,re_dist,"
            "cum_stat_loss,cum_realized_loss");
  std::string conv = ReadFile(dir / "convergence.csv");
  EXPECT_EQ(conv.substr(0, conv.find('\n')), "t,eps_avg,re_dist,l1_dist,entropy");

  std::string before = ReadFile(dir / "summary.json") + rounds + conv +
                       ReadFile(dir / "regret.csv");
  Report(dir);
  std::string after = ReadFile(dir / "summary.json") +
                      ReadFile(dir / "rounds.csv") +
                      ReadFile(dir / "convergence.csv") +
                      ReadFile(dir / "regret.csv");
  EXPECT_EQ(before, after);

  // Raw records survive a CSV round trip exactly.
  auto recs = ParseRecordsCsv(ReadFile(dir / "records.csv"));
  EXPECT_EQ(RecordsToCsv(recs), ReadFile(dir / "records.csv"));
  fs::remove_all(dir);
}

TEST(ReportTest, MissingRunIsNotFound) {
  fs::path dir = TempDir("missing");
  EXPECT_THROW(Report(dir), NotFoundError);
  fs::create_directories(dir);
  EXPECT_THROW(Report(dir), NotFoundError);
  fs::remove_all(dir);
}

TEST(SweepTest, JobsDoNotChangeOutput) {
  fs::path a = TempDir("sweep_a"), b = TempDir("sweep_b");
  RunConfig c = ParseRunConfig(R"({"horizon":200})");
  c.output_dir = a.string();
  Sweep(c, 0, 4, 1);
  c.output_dir = b.string();
  Sweep(c, 0, 4, 3);
  EXPECT_EQ(ReadFile(a / "sweep.csv"), ReadFile(b / "sweep.csv"));
  EXPECT_EQ(ReadFile(a / "seed_3" / "rounds.csv"),
            ReadFile(b / "seed_3" / "rounds.csv"));
  EXPECT_THROW(Sweep(c, 3, 2, 1), ConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
}  // namespace omdp
