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

#include "omdp/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <initializer_list>
#include <random>
#include <thread>

#include "json.hpp"

#include "omdp/errors.h"
#include "omdp/io.h"
#include "omdp/mdp.h"
#include "omdp/report.h"

namespace omdp {
namespace {

using nlohmann::json;

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int SampleIndex(std::mt19937_64& rng, const auto& probs) {
  double u = Uniform01(rng);
  double acc = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Round-off: fall back to the last index with mass.
  for (int i = n - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return i;
  }
  return n - 1;
}

void CheckKeys(const json& obj, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + ": expected an object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void Read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::string ScheduleName(StepSchedule::Kind kind) {
  return kind == StepSchedule::Kind::kAnytime ? "anytime" : "fixed_horizon";
}

RunConfig ParseConfigJson(const json& root) {
  RunConfig c;
  CheckKeys(root, "config",
            {"model", "losses", "agent", "adversary", "horizon", "output_dir",
             "realized", "trajectory_seed", "regret"});
  if (root.contains("model")) {
    const json& m = root.at("model");
    CheckKeys(m, "model",
              {"seed", "num_states", "num_actions", "lambda", "path"});
    Read(m, "seed", c.model_seed);
    Read(m, "num_states", c.num_states);
    Read(m, "num_actions", c.num_actions);
    Read(m, "lambda", c.lambda);
    Read(m, "path", c.model_path);
  }
  c.loss_seed = c.model_seed;
  if (root.contains("losses")) {
    const json& l = root.at("losses");
    CheckKeys(l, "losses", {"seed", "num_vertices", "path"});
    Read(l, "seed", c.loss_seed);
    Read(l, "num_vertices", c.num_vertices);
    Read(l, "path", c.loss_path);
  }
  if (root.contains("agent")) {
    const json& a = root.at("agent");
    CheckKeys(a, "agent",
              {"kind", "epsilon", "lbar_mode", "beta", "tau_floor", "seed",
               "policy"});
    Read(a, "kind", c.agent.kind);
    Read(a, "epsilon", c.agent.epsilon);
    Read(a, "beta", c.agent.beta);
    Read(a, "tau_floor", c.agent.tau_floor);
    Read(a, "seed", c.agent.seed);
    if (a.contains("lbar_mode")) {
      auto mode = a.at("lbar_mode").get<std::string>();
      if (mode == "window") {
        c.agent.lbar_mode = LbarMode::kWindow;
      } else if (mode == "total") {
        c.agent.lbar_mode = LbarMode::kTotal;
      } else {
        throw ConfigError("agent.lbar_mode must be 'window' or 'total'");
      }
    }
    if (a.contains("policy") && !a.at("policy").is_null()) {
      c.agent.fixed_policy = a.at("policy").get<std::vector<int>>();
    }
  }
  bool cap_given = false;
  if (root.contains("adversary")) {
    const json& a = root.at("adversary");
    CheckKeys(a, "adversary", {"kind", "schedule", "cap", "seed"});
    Read(a, "kind", c.adversary);
    Read(a, "seed", c.adversary_seed);
    if (a.contains("schedule")) {
      auto kind = a.at("schedule").get<std::string>();
      if (kind == "anytime") {
        c.schedule.kind = StepSchedule::Kind::kAnytime;
      } else if (kind == "fixed_horizon") {
        c.schedule.kind = StepSchedule::Kind::kFixedHorizon;
      } else {
        throw ConfigError(
            "adversary.schedule must be 'anytime' or 'fixed_horizon'");
      }
    }
    if (a.contains("cap") && !a.at("cap").is_null()) {
      c.schedule.cap = a.at("cap").get<double>();
      cap_given = true;
    }
  }
  Read(root, "horizon", c.horizon);
  Read(root, "output_dir", c.output_dir);
  if (root.contains("realized")) {
    auto mode = root.at("realized").get<std::string>();
    if (mode != "expected" && mode != "sampled") {
      throw ConfigError("realized must be 'expected' or 'sampled'");
    }
    c.sampled = mode == "sampled";
  }
  Read(root, "trajectory_seed", c.trajectory_seed);
  if (root.contains("regret")) {
    const json& r = root.at("regret");
    CheckKeys(r, "regret", {"enabled", "checkpoints"});
    Read(r, "enabled", c.compute_regret);
    Read(r, "checkpoints", c.checkpoints);
  }

  // LRC needs μ_t ≤ 1/3 from the start.
  if (c.agent.kind == "lrc" && !cap_given) c.schedule.cap = 1.0 / 3.0;
  c.schedule.horizon = c.horizon;

  if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(c.lambda > 0.0 && c.lambda <= 1.0)) {
    throw ConfigError("lambda must lie in (0, 1]");
  }
  if (c.num_states < 1 || c.num_actions < 1 || c.num_vertices < 1) {
    throw ConfigError("num_states, num_actions and num_vertices must be >= 1");
  }
  if (!(c.schedule.cap > 0.0)) throw ConfigError("adversary.cap must be > 0");
  if (!(c.agent.tau_floor > 0.0)) throw ConfigError("tau_floor must be > 0");
  if (c.adversary != "mwu" && c.adversary != "best_response" &&
      c.adversary != "oblivious") {
    throw ConfigError("unknown adversary kind: " + c.adversary);
  }
  static const char* kAgents[] = {"mdpe", "mdpooe", "mdpooe_eps", "lrc",
                                  "fixed"};
  if (std::find(std::begin(kAgents), std::end(kAgents), c.agent.kind) ==
      std::end(kAgents)) {
    throw ConfigError("unknown agent kind: " + c.agent.kind);
  }
  for (auto cp : c.checkpoints) {
    if (cp < 1 || cp > c.horizon) {
      throw ConfigError("regret checkpoints must lie in [1, horizon]");
    }
  }
  return c;
}

}  // namespace

RunConfig ParseRunConfig(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return ParseConfigJson(root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a wrongly typed field: ") +
                      e.what());
  }
}

std::string RunConfigToJson(const RunConfig& c) {
  json model = {{"seed", c.model_seed},
                {"num_states", c.num_states},
                {"num_actions", c.num_actions},
                {"lambda", c.lambda}};
  if (!c.model_path.empty()) model["path"] = c.model_path;
  json losses = {{"seed", c.loss_seed}, {"num_vertices", c.num_vertices}};
  if (!c.loss_path.empty()) losses["path"] = c.loss_path;
  json agent = {{"kind", c.agent.kind},
                {"epsilon", c.agent.epsilon},
                {"lbar_mode",
                 c.agent.lbar_mode == LbarMode::kWindow ? "window" : "total"},
                {"beta", c.agent.beta},
                {"tau_floor", c.agent.tau_floor},
                {"seed", c.agent.seed}};
  if (c.agent.fixed_policy) agent["policy"] = *c.agent.fixed_policy;
  json adversary = {{"kind", c.adversary},
                    {"schedule", ScheduleName(c.schedule.kind)},
                    {"seed", c.adversary_seed}};
  if (std::isfinite(c.schedule.cap)) adversary["cap"] = c.schedule.cap;
  json root = {{"model", model},
               {"losses", losses},
               {"agent", agent},
               {"adversary", adversary},
               {"horizon", c.horizon},
               {"output_dir", c.output_dir},
               {"realized", c.sampled ? "sampled" : "expected"},
               {"trajectory_seed", c.trajectory_seed},
               {"regret",
                {{"enabled", c.compute_regret},
                 {"checkpoints", c.checkpoints}}}};
  return root.dump(2) + "\n";
}

RunConfig WithSeed(RunConfig config, std::uint64_t seed) {
  config.model_seed = seed;
  config.loss_seed = seed;
  config.agent.seed = seed;
  config.adversary_seed = seed;
  config.trajectory_seed = seed;
  return config;
}

MdpModel GenerateModel(std::uint64_t seed, int num_states, int num_actions,
                       double lambda) {
  if (num_states < 1 || num_actions < 1) {
    throw ConfigError("instance sizes must be >= 1");
  }
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  const int S = num_states;
  Matrix transition(S * num_actions, S);
  for (int r = 0; r < transition.rows(); ++r) {
    Vector row(S);
    for (int j = 0; j < S; ++j) row[j] = Uniform01(rng);
    double total = row.sum();
    if (total > 0.0) {
      row /= total;
    } else {
      row.setConstant(1.0 / S);
    }
    transition.row(r) = ((1.0 - lambda) * row.array() + lambda / S).matrix();
  }
  return MdpModel(S, num_actions, std::move(transition));
}

LossSet GenerateLosses(std::uint64_t seed, int num_states, int num_actions,
                       int num_vertices) {
  if (num_states < 1 || num_actions < 1 || num_vertices < 1) {
    throw ConfigError("instance sizes must be >= 1");
  }
  // Separate stream from the model generator under the same seed.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<LossVector> vertices;
  for (int i = 0; i < num_vertices; ++i) {
    Vector l(num_states * num_actions);
    for (int j = 0; j < l.size(); ++j) l[j] = Uniform01(rng);
    vertices.emplace_back(num_states, num_actions, std::move(l));
  }
  return LossSet(std::move(vertices));
}

std::pair<MdpModel, LossSet> GenerateInstance(std::uint64_t seed,
                                              int num_states, int num_actions,
                                              int num_vertices, double lambda) {
  return {GenerateModel(seed, num_states, num_actions, lambda),
          GenerateLosses(seed, num_states, num_actions, num_vertices)};
}

Instance BuildInstance(const RunConfig& config) {
  MdpModel model = config.model_path.empty()
                       ? GenerateModel(config.model_seed, config.num_states,
                                       config.num_actions, config.lambda)
                       : LoadModel(config.model_path);
  LossSet losses =
      config.loss_path.empty()
          ? GenerateLosses(config.loss_seed, model.num_states(),
                           model.num_actions(), config.num_vertices)
          : LoadLossSet(config.loss_path, model.num_states(),
                        model.num_actions());
  return Instance{std::move(model), std::move(losses)};
}

Adversary MakeAdversary(const RunConfig& config, int num_vertices) {
  if (config.adversary == "mwu") {
    return Adversary::Mwu(num_vertices, config.schedule);
  }
  if (config.adversary == "best_response") {
    return Adversary::BestResponder(num_vertices);
  }
  if (config.adversary == "oblivious") {
    return Adversary::Oblivious(num_vertices, config.adversary_seed);
  }
  throw ConfigError("unknown adversary kind: " + config.adversary);
}

std::vector<RoundRecord> RunLoop(const RunConfig& config, const MdpModel& model,
                                 const LossSet& losses,
                                 const EquilibriumSolution& eq,
                                 const RoundObserver& observer) {
  const int S = model.num_states();
  const int A = model.num_actions();
  std::unique_ptr<Agent> agent = MakeAgent(config.agent, model, losses, &eq);
  Adversary adversary = MakeAdversary(config, losses.size());
  const Vector& x_star = eq.adversary_mixture.weights();

  std::mt19937_64 path_rng(config.trajectory_seed);
  int state = config.sampled ? SampleIndex(path_rng, model.initial_dist()) : 0;

  Vector joint;
  Vector sum_d = Vector::Zero(model.num_pairs());
  Vector sum_x = Vector::Zero(losses.size());
  double cum_stat = 0.0;
  double cum_realized = 0.0;
  std::vector<RoundRecord> records;
  records.reserve(static_cast<size_t>(config.horizon));

  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    AgentStep step = agent->NextPolicy(t);
    const AdversaryMixture x = adversary.mixture();
    LossVector loss = RealizedLoss(x, losses);
    OccupancyMeasure d = OccupancyOfPolicy(model, step.policy);

    RoundRecord rec;
    rec.t = t;
    rec.stat_loss = AverageLoss(d, loss);
    joint = t == 1 ? InitialJointDistribution(model, step.policy)
                   : PropagateDistribution(model, joint, step.policy);
    if (config.sampled) {
      int action = SampleIndex(path_rng, step.policy.probs().row(state));
      rec.realized_loss = loss(state, action);
      state = SampleIndex(path_rng, model.row(state, action));
    } else {
      rec.realized_loss = std::clamp(loss.values().dot(joint), 0.0, 1.0);
    }
    rec.entropy = Entropy(x);
    rec.window = step.window;
    rec.alpha = step.alpha;
    rec.re_dist = RelativeEntropy(eq.adversary_mixture, x);
    rec.l1_dist = (x.weights() - x_star).lpNorm<1>();

    agent->Observe(loss);
    adversary.Observe(losses, d);

    sum_d += d.mass();
    sum_x += x.weights();
    rec.eps_avg = EpsilonNeCertify(OccupancyMeasure(S, A, sum_d / sum_d.sum()),
                                   AdversaryMixture(sum_x / sum_x.sum()),
                                   losses, model);
    cum_stat += rec.stat_loss;
    cum_realized += rec.realized_loss;
    rec.cum_stat_loss = cum_stat;
    rec.cum_realized_loss = cum_realized;
    if (observer) observer(rec, step);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<Comparator> DefaultComparators(const MdpModel& model,
                                           const EquilibriumSolution& eq,
                                           std::uint64_t limit) {
  std::vector<Comparator> out;
  out.push_back(Comparator{"pi_star", eq.agent_policy});
  for (const auto& p : EnumerateDeterministicPolicies(model, limit)) {
    std::string label = "det:";
    for (int s = 0; s < p.num_states(); ++s) {
      if (s > 0) label += '-';
      label += std::to_string(p[s]);
    }
    out.push_back(Comparator{std::move(label), p.ToStochastic()});
  }
  return out;
}

RegretReport PolicyRegret(const RunConfig& config, const MdpModel& model,
                          const LossSet& losses,
                          const std::vector<RoundRecord>& records,
                          const std::vector<Comparator>& comparators) {
  if (comparators.empty()) throw ConfigError("no regret comparators given");
  const auto T = static_cast<std::int64_t>(records.size());
  std::vector<std::int64_t> horizons;
  for (auto cp : config.checkpoints) {
    if (cp >= 1 && cp <= T) horizons.push_back(cp);
  }
  if (T >= 1) horizons.push_back(T);
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()),
                 horizons.end());

  const size_t n = comparators.size();
  const size_t H = horizons.size();
  // [candidate][checkpoint]
  std::vector<std::vector<double>> stat(n, std::vector<double>(H, 0.0));
  std::vector<std::vector<double>> realized(n, std::vector<double>(H, 0.0));

  for (size_t c = 0; c < n; ++c) {
    const StochasticPolicy& policy = comparators[c].policy;
    OccupancyMeasure d = OccupancyOfPolicy(model, policy);
    Adversary adversary = MakeAdversary(config, losses.size());
    Vector joint = InitialJointDistribution(model, policy);
    // v_t^π of a fixed policy: one propagation step per round.
    const Matrix chain_joint = [&] {
      Matrix m = Matrix::Zero(model.num_pairs(), model.num_pairs());
      for (int j = 0; j < model.num_pairs(); ++j) {
        for (int next = 0; next < model.num_states(); ++next) {
          for (int a = 0; a < model.num_actions(); ++a) {
            m(PairIndex(next, a, model.num_actions()), j) =
                model.transition()(j, next) * policy(next, a);
          }
        }
      }
      return m;
    }();
    double cum_stat = 0.0;
    double cum_realized = 0.0;
    size_t h = 0;
    for (std::int64_t t = 1; t <= T && h < H; ++t) {
      if (t > 1) joint = chain_joint * joint;
      const Vector& x = adversary.mixture().weights();
      Vector payoffs = losses.Payoffs(d);
      cum_stat += x.dot(payoffs);
      Vector l = losses.AsMatrix().transpose() * x;
      cum_realized += l.dot(joint);
      adversary.Observe(losses, d);
      if (t == horizons[h]) {
        stat[c][h] = cum_stat;
        realized[c][h] = cum_realized;
        ++h;
      }
    }
  }

  RegretReport report;
  for (const auto& c : comparators) report.candidate_labels.push_back(c.label);
  for (size_t h = 0; h < H; ++h) {
    const RoundRecord& rec = records[static_cast<size_t>(horizons[h] - 1)];
    RegretCheckpoint cp{horizons[h], rec.cum_stat_loss, rec.cum_realized_loss,
                        0, stat[0][h], 0, realized[0][h]};
    for (size_t c = 1; c < n; ++c) {
      if (stat[c][h] < cp.best_stationary_loss) {
        cp.best_stationary_loss = stat[c][h];
        cp.best_stationary_candidate = static_cast<int>(c);
      }
      if (realized[c][h] < cp.best_realized_loss) {
        cp.best_realized_loss = realized[c][h];
        cp.best_realized_candidate = static_cast<int>(c);
      }
    }
    report.checkpoints.push_back(cp);
  }
  for (size_t c = 0; c < n; ++c) {
    report.candidate_stationary.push_back(H ? stat[c][H - 1] : 0.0);
    report.candidate_realized.push_back(H ? realized[c][H - 1] : 0.0);
  }
  if (H == 0) report.checkpoints.push_back(RegretCheckpoint{0, 0, 0, 0, 0, 0, 0});
  return report;
}

double StationaryRegret(const RunConfig& config, const MdpModel& model,
                        const LossSet& losses,
                        const std::vector<RoundRecord>& records,
                        const std::vector<Comparator>& comparators) {
  return PolicyRegret(config, model, losses, records, comparators)
      .stationary_regret();
}

ConvergenceReport MakeConvergenceReport(const std::vector<RoundRecord>& records,
                                        const StepSchedule& schedule,
                                        int num_vertices, double slack) {
  ConvergenceReport r;
  for (const auto& rec : records) {
    r.t.push_back(rec.t);
    r.eps_avg.push_back(rec.eps_avg);
    r.re_dist.push_back(rec.re_dist);
    r.l1_dist.push_back(rec.l1_dist);
    r.entropy.push_back(rec.entropy);
  }
  const auto T = static_cast<std::int64_t>(records.size());
  if (T == 0) return r;
  r.t_prime = schedule.FirstRoundAtOrBelow(1.0 / 3.0, num_vertices, T);
  r.l1_final = records.back().l1_dist;
  if (r.t_prime < 1) {
    r.l1_at_t_prime = std::nan("");
    return r;
  }
  r.l1_at_t_prime = records[static_cast<size_t>(r.t_prime - 1)].l1_dist;
  // Pairs (2k−1, 2k+1) with 2k ≥ t'.
  for (std::int64_t even = 2; even + 1 <= T; even += 2) {
    if (even < r.t_prime) continue;
    double before = records[static_cast<size_t>(even - 2)].re_dist;
    double after = records[static_cast<size_t>(even)].re_dist;
    double increase = after - before;
    if (std::isnan(increase)) continue;
    r.max_re_increase = std::max(r.max_re_increase, increase);
    if (increase > slack) r.re_monotone = false;
  }
  return r;
}

RunSummary ExecuteRun(const RunConfig& config) {
  Instance inst = BuildInstance(config);
  EquilibriumSolution eq = SolveGame(inst.model, inst.losses);
  std::vector<RoundRecord> records =
      RunLoop(config, inst.model, inst.losses, eq);
  std::optional<RegretReport> regret;
  if (config.compute_regret) {
    regret = PolicyRegret(config, inst.model, inst.losses, records,
                          DefaultComparators(inst.model, eq));
  }
  WriteRunFiles(config.output_dir, config, inst.model, eq, records, regret);
  return Report(config.output_dir);
}

std::vector<RunSummary> Sweep(const RunConfig& config, std::uint64_t first_seed,
                              std::uint64_t last_seed, int jobs) {
  if (last_seed < first_seed) throw ConfigError("empty seed range");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  const std::uint64_t count = last_seed - first_seed + 1;
  std::vector<RunSummary> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      const std::uint64_t seed = first_seed + i;
      RunConfig c = WithSeed(config, seed);
      c.output_dir = (std::filesystem::path(config.output_dir) /
                      ("seed_" + std::to_string(seed)))
                         .string();
      try {
        out[i] = ExecuteRun(c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      static_cast<int>(std::min<std::uint64_t>(count, static_cast<std::uint64_t>(jobs)));
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  WriteFile(std::filesystem::path(config.output_dir) / "sweep.csv",
            SweepCsv(out));
  return out;
}

std::string SweepCsv(const std::vector<RunSummary>& runs) {
  std::string out =
      "seed,horizon,value,cum_stat_loss,cum_realized_loss,stationary_regret,"
      "policy_regret,eps_final,l1_final,windows\n";
  for (const auto& r : runs) {
    out += std::to_string(r.seed) + "," + std::to_string(r.horizon) + "," +
           FormatDouble(r.value) + "," + FormatDouble(r.cum_stat_loss) + "," +
           FormatDouble(r.cum_realized_loss) + "," +
           FormatDouble(r.stationary_regret) + "," +
           FormatDouble(r.policy_regret) + "," + FormatDouble(r.eps_final) +
           "," + FormatDouble(r.l1_final) + "," + std::to_string(r.windows) +
           "\n";
  }
  return out;
}

}  // namespace omdp
