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

#include "omdp/equilibrium.h"

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>

#include "omdp/errors.h"
#include "omdp/mdp.h"
#include "omdp/simplex.h"

namespace omdp {
namespace {

constexpr double kCertificateTolerance = 1e-6;

// Normalizes −y over the given multipliers; falls back to a point mass on
// `fallback` when the multipliers carry no mass.
AdversaryMixture MixtureFromDuals(const Vector& duals, int fallback) {
  Vector w = (-duals).cwiseMax(0.0).array() + 0.0;
  double total = w.sum();
  if (total < 1e-9) {
    return AdversaryMixture::PointMass(static_cast<int>(duals.size()),
                                       fallback);
  }
  return AdversaryMixture(w / total);
}

Vector ProjectToSimplex(const Vector& x) {
  Vector p = x.cwiseMax(0.0);
  return p / p.sum();
}

int ArgMax(const Vector& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double MinAverageLoss(const MdpModel& model, const LossVector& loss) {
  DeterministicPolicy br = BestResponse(model, loss);
  return AverageLoss(OccupancyOfPolicy(model, br.ToStochastic()), loss);
}

}  // namespace

EquilibriumSolution SolveGame(const MdpModel& model, const LossSet& losses) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int SA = model.num_pairs();
  const int L = losses.size();
  if (losses.num_states() != S || losses.num_actions() != A) {
    throw ConfigError("loss set dimensions do not match the model");
  }

  // Variables: d(s,a) for every pair, then t.
  LinearProgram lp;
  lp.objective = Vector::Zero(SA + 1);
  lp.objective[SA] = 1.0;
  lp.constraints = Matrix::Zero(L + S + 1, SA + 1);
  lp.rhs = Vector::Zero(L + S + 1);
  const Matrix& m = losses.AsMatrix();
  for (int i = 0; i < L; ++i) {
    lp.constraints.row(i).head(SA) = m.row(i);
    lp.constraints(i, SA) = -1.0;
    lp.senses.push_back(RowSense::kLessEqual);
  }
  for (int next = 0; next < S; ++next) {
    int row = L + next;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        int j = PairIndex(s, a, A);
        lp.constraints(row, j) -= model.p(s, a, next);
        if (s == next) lp.constraints(row, j) += 1.0;
      }
    }
    lp.senses.push_back(RowSense::kEqual);
  }
  lp.constraints.row(L + S).head(SA).setOnes();
  lp.rhs[L + S] = 1.0;
  lp.senses.push_back(RowSense::kEqual);

  LpSolution sol = SolveLinearProgram(lp);
  const double value = sol.objective;

  OccupancyMeasure lp_occupancy(S, A, ProjectToSimplex(sol.x.head(SA)));
  StochasticPolicy policy = PolicyOfOccupancy(model, lp_occupancy);
  // Recomputing from π* doubles as the ergodicity check.
  OccupancyMeasure occupancy = OccupancyOfPolicy(model, policy);

  Vector payoffs = losses.Payoffs(occupancy);
  AdversaryMixture mixture =
      MixtureFromDuals(sol.duals.head(L), ArgMax(payoffs));
  double min_loss = MinAverageLoss(model, RealizedLoss(mixture, losses));
  double max_payoff = payoffs.maxCoeff();
  double gap = max_payoff - min_loss;

  if (gap > kCertificateTolerance ||
      max_payoff - value > kCertificateTolerance ||
      value - min_loss > kCertificateTolerance) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "equilibrium certificate failed: v=%.12g max_i<l_i,d*>=%.12g "
                  "min_pi eta(l*)=%.12g gap=%.3g pivots=%d",
                  value, max_payoff, min_loss, gap, sol.pivots);
    throw NumericalError(buf);
  }
  return EquilibriumSolution{value, std::move(occupancy), std::move(policy),
                             std::move(mixture), gap};
}

MatrixGameSolution MatrixGameOracle(const MdpModel& model,
                                    const LossSet& losses,
                                    std::uint64_t limit) {
  std::vector<DeterministicPolicy> policies =
      EnumerateDeterministicPolicies(model, limit);
  const int n = static_cast<int>(policies.size());
  const int L = losses.size();

  Matrix payoff(n, L);
  for (int i = 0; i < n; ++i) {
    OccupancyMeasure d =
        OccupancyOfPolicy(model, policies[static_cast<size_t>(i)].ToStochastic());
    payoff.row(i) = losses.Payoffs(d).transpose();
  }

  // min v  s.t.  Σ_i p_i M_ij ≤ v ∀j,  Σ p = 1.
  LinearProgram lp;
  lp.objective = Vector::Zero(n + 1);
  lp.objective[n] = 1.0;
  lp.constraints = Matrix::Zero(L + 1, n + 1);
  lp.rhs = Vector::Zero(L + 1);
  for (int j = 0; j < L; ++j) {
    lp.constraints.row(j).head(n) = payoff.col(j).transpose();
    lp.constraints(j, n) = -1.0;
    lp.senses.push_back(RowSense::kLessEqual);
  }
  lp.constraints.row(L).head(n).setOnes();
  lp.rhs[L] = 1.0;
  lp.senses.push_back(RowSense::kEqual);

  LpSolution sol = SolveLinearProgram(lp);
  Vector rows = ProjectToSimplex(sol.x.head(n));
  Vector col_payoffs = payoff.transpose() * rows;
  AdversaryMixture cols = MixtureFromDuals(sol.duals.head(L),
                                           ArgMax(col_payoffs));
  return MatrixGameSolution{sol.objective, std::move(policies),
                            std::move(payoff), std::move(rows),
                            cols.weights()};
}

double AgentExploitability(const OccupancyMeasure& d, const LossSet& losses,
                           double value) {
  return losses.Payoffs(d).maxCoeff() - value;
}

double AdversaryExploitability(const AdversaryMixture& mixture,
                               const LossSet& losses, const MdpModel& model,
                               double value) {
  return value - MinAverageLoss(model, RealizedLoss(mixture, losses));
}

double EpsilonNeCertify(const OccupancyMeasure& d,
                        const AdversaryMixture& mixture, const LossSet& losses,
                        const MdpModel& model) {
  LossVector l = RealizedLoss(mixture, losses);
  double payoff = AverageLoss(d, l);
  double agent_side = losses.Payoffs(d).maxCoeff() - payoff;
  double adversary_side = payoff - MinAverageLoss(model, l);
  return std::max({agent_side, adversary_side, 0.0});
}

SupportReport ComputeSupportReport(const MdpModel& model, const LossSet& losses,
                                   double threshold) {
  MatrixGameSolution game = MatrixGameOracle(model, losses);
  auto count = [threshold](const Vector& v) {
    return static_cast<int>((v.array() > threshold).count());
  };
  return SupportReport{count(game.row_mixture), count(game.column_mixture),
                       threshold};
}

}  // namespace omdp
