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

#include "omdp/mdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "omdp/errors.h"

namespace omdp {
namespace {

constexpr double kStationaryResidual = 1e-12;
constexpr int kPowerIterations = 100000;
// Two Q-values closer than this are treated as tied.
constexpr double kTieTolerance = 1e-11;
constexpr int kMaxValueIterationSweeps = 1000000;

void CheckPolicyShape(const MdpModel& model, const StochasticPolicy& policy) {
  if (policy.num_states() != model.num_states() ||
      policy.num_actions() != model.num_actions()) {
    throw ConfigError("policy dimensions do not match the model");
  }
}

double StationaryResidual(const Vector& x, const Matrix& chain) {
  return (chain.transpose() * x - x).lpNorm<1>();
}

// Loss averaged over the policy's action choice in each state.
Vector StateLoss(const MdpModel& model, const StochasticPolicy& policy,
                 const LossVector& loss) {
  Vector out(model.num_states());
  for (int s = 0; s < model.num_states(); ++s) {
    double acc = 0.0;
    for (int a = 0; a < model.num_actions(); ++a) acc += policy(s, a) * loss(s, a);
    out[s] = acc;
  }
  return out;
}

// Q(s,a) = l(s,a) - η + Σ_{s'} P(s'|s,a) h(s').
Matrix QFromBias(const MdpModel& model, const LossVector& loss, double eta,
                 const Vector& bias) {
  const Vector next = model.transition() * bias;
  Matrix q(model.num_states(), model.num_actions());
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < model.num_actions(); ++a) {
      q(s, a) = loss(s, a) - eta + next[PairIndex(s, a, model.num_actions())];
    }
  }
  return q;
}

bool Allowed(const std::optional<ActionMask>& mask, int s, int a) {
  return !mask || (*mask)[static_cast<size_t>(s)][static_cast<size_t>(a)];
}

// Lowest allowed action whose value is within the tie tolerance of the
// allowed minimum.
int ArgminLowestIndex(const Matrix& q, int s,
                      const std::optional<ActionMask>& mask) {
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < q.cols(); ++a) {
    if (Allowed(mask, s, a)) best = std::min(best, q(s, a));
  }
  for (int a = 0; a < q.cols(); ++a) {
    if (Allowed(mask, s, a) && q(s, a) <= best + kTieTolerance) return a;
  }
  return -1;
}

}  // namespace

Matrix InducedChain(const MdpModel& model, const StochasticPolicy& policy) {
  CheckPolicyShape(model, policy);
  const int n = model.num_states();
  Matrix chain = Matrix::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < model.num_actions(); ++a) {
      const double w = policy(s, a);
      if (w != 0.0) chain.row(s) += w * model.row(s, a);
    }
  }
  return chain;
}

Vector StationaryStateDist(const Matrix& chain) {
  const Eigen::Index n = chain.rows();
  if (n == 0 || chain.cols() != n) {
    throw ConfigError("stationary distribution: chain must be square");
  }
  for (Eigen::Index s = 0; s < n; ++s) {
    if (std::abs(chain.row(s).sum() - 1.0) > 1e-10 || chain.row(s).minCoeff() < 0) {
      throw ConfigError("stationary distribution: row " + std::to_string(s) +
                        " is not stochastic");
    }
  }
  const Matrix system = Matrix::Identity(n, n) - chain.transpose() +
                        Matrix::Ones(n, n);
  const Vector rhs = Vector::Ones(n);
  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(1e-13);
  if (lu.rank() < n) {
    throw ErgodicityError(
        "induced chain has no unique stationary distribution");
  }
  Vector x = lu.solve(rhs);
  x += lu.solve(rhs - system * x);  // one step of iterative refinement
  if (x.minCoeff() < -1e-9) {
    throw ErgodicityError("stationary solve produced a negative mass");
  }
  x = x.cwiseMax(0.0);
  x /= x.sum();
  if (StationaryResidual(x, chain) <= kStationaryResidual) return x;

  for (int it = 0; it < kPowerIterations; ++it) {
    Vector next = chain.transpose() * x;
    next /= next.sum();
    x = next;
    if (StationaryResidual(x, chain) <= kStationaryResidual) return x;
  }
  throw ErgodicityError("power iteration did not reach the stationary residual");
}

OccupancyMeasure OccupancyOfPolicy(const MdpModel& model,
                                   const StochasticPolicy& policy) {
  const Vector state_dist = StationaryStateDist(InducedChain(model, policy));
  Vector mass(model.num_pairs());
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < model.num_actions(); ++a) {
      mass[PairIndex(s, a, model.num_actions())] = state_dist[s] * policy(s, a);
    }
  }
  return OccupancyMeasure(model.num_states(), model.num_actions(),
                          std::move(mass));
}

double FlowResidual(const MdpModel& model, const OccupancyMeasure& d) {
  if (d.num_states() != model.num_states() ||
      d.num_actions() != model.num_actions()) {
    throw ConfigError("occupancy dimensions do not match the model");
  }
  const Vector inflow = model.transition().transpose() * d.mass();
  return (d.StateMarginal() - inflow).cwiseAbs().maxCoeff();
}

StochasticPolicy PolicyOfOccupancy(const MdpModel& model,
                                   const OccupancyMeasure& d) {
  const double residual = FlowResidual(model, d);
  if (residual > 1e-8) {
    throw InvalidOccupancyError("occupancy violates flow constraints by " +
                                std::to_string(residual));
  }
  const int num_actions = model.num_actions();
  Matrix probs(model.num_states(), num_actions);
  for (int s = 0; s < model.num_states(); ++s) {
    const auto row = d.mass().segment(s * num_actions, num_actions);
    const double mass = row.sum();
    if (mass > 0.0) {
      probs.row(s) = row.transpose() / mass;
    } else {
      probs.row(s).setConstant(1.0 / num_actions);
    }
  }
  return StochasticPolicy(std::move(probs));
}

double AverageLoss(const OccupancyMeasure& d, const LossVector& loss) {
  if (d.num_states() != loss.num_states() ||
      d.num_actions() != loss.num_actions()) {
    throw ConfigError("average loss: dimension mismatch");
  }
  return d.mass().dot(loss.values());
}

BiasSolution SolveBias(const MdpModel& model, const StochasticPolicy& policy,
                       const LossVector& loss) {
  CheckPolicyShape(model, policy);
  if (loss.num_states() != model.num_states() ||
      loss.num_actions() != model.num_actions()) {
    throw ConfigError("loss dimensions do not match the model");
  }
  const int n = model.num_states();
  const Matrix chain = InducedChain(model, policy);
  const Vector state_dist = StationaryStateDist(chain);
  const Vector state_loss = StateLoss(model, policy, loss);
  const double eta = state_dist.dot(state_loss);

  // (I - P(π) + 1 d̃ᵀ) h = l_π - η 1 pins d̃ᵀh = 0.
  const Matrix system = Matrix::Identity(n, n) - chain +
                        Vector::Ones(n) * state_dist.transpose();
  const Vector rhs = state_loss - Vector::Constant(n, eta);
  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) {
    throw ErgodicityError("Poisson system is singular");
  }
  Vector bias = lu.solve(rhs);
  bias += lu.solve(rhs - system * bias);

  BiasSolution out;
  out.eta = eta;
  out.q = QFromBias(model, loss, eta, bias);
  out.bias = (out.q.cwiseProduct(policy.probs())).rowwise().sum();
  return out;
}

DeterministicPolicy BestResponse(const MdpModel& model, const LossVector& loss,
                                 const std::optional<ActionMask>& allowed) {
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  if (loss.num_states() != num_states || loss.num_actions() != num_actions) {
    throw ConfigError("loss dimensions do not match the model");
  }
  if (allowed) {
    if (static_cast<int>(allowed->size()) != num_states) {
      throw ConfigError("action mask must have one row per state");
    }
    for (const auto& row : *allowed) {
      if (static_cast<int>(row.size()) != num_actions ||
          std::find(row.begin(), row.end(), true) == row.end()) {
        throw ConfigError("action mask rows need at least one allowed action");
      }
    }
  }

  // Start from the myopic minimizer of the immediate loss.
  Matrix immediate(num_states, num_actions);
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) immediate(s, a) = loss(s, a);
  }
  std::vector<int> actions(static_cast<size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    actions[s] = ArgminLowestIndex(immediate, s, allowed);
  }

  const std::uint64_t count = CountDeterministicPolicies(model);
  const std::uint64_t max_iterations =
      std::min<std::uint64_t>(count, 1000000) + 1;
  for (std::uint64_t it = 0; it < max_iterations; ++it) {
    DeterministicPolicy current(actions, num_actions);
    const BiasSolution sol = SolveBias(model, current.ToStochastic(), loss);
    bool changed = false;
    for (int s = 0; s < num_states; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < num_actions; ++a) {
        if (Allowed(allowed, s, a)) best = std::min(best, sol.q(s, a));
      }
      if (sol.q(s, actions[s]) > best + kTieTolerance) {
        actions[s] = ArgminLowestIndex(sol.q, s, allowed);
        changed = true;
      }
    }
    if (changed) continue;

    // Converged: canonicalize ties toward the lowest index, keeping the
    // canonical policy only if it passes the optimality check itself.
    std::vector<int> canonical(actions);
    for (int s = 0; s < num_states; ++s) {
      canonical[s] = ArgminLowestIndex(sol.q, s, allowed);
    }
    if (canonical == actions) return current;
    DeterministicPolicy candidate(canonical, num_actions);
    const BiasSolution check = SolveBias(model, candidate.ToStochastic(), loss);
    for (int s = 0; s < num_states; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < num_actions; ++a) {
        if (Allowed(allowed, s, a)) best = std::min(best, check.q(s, a));
      }
      if (check.q(s, canonical[s]) > best + kTieTolerance) return current;
    }
    return candidate;
  }
  throw SolverError("policy iteration did not converge within |A|^|S| steps");
}

EpsilonBestResponseResult SolveEpsilonBestResponse(const MdpModel& model,
                                                   const LossVector& loss,
                                                   double eps) {
  if (!(eps > 0.0)) {
    throw ConfigError("epsilon best response needs eps > 0");
  }
  if (loss.num_states() != model.num_states() ||
      loss.num_actions() != model.num_actions()) {
    throw ConfigError("loss dimensions do not match the model");
  }
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  Vector h = Vector::Zero(num_states);
  Matrix q(num_states, num_actions);
  for (int sweep = 1; sweep <= kMaxValueIterationSweeps; ++sweep) {
    const Vector next = model.transition() * h;
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        q(s, a) = loss(s, a) + next[PairIndex(s, a, num_actions)];
      }
    }
    std::vector<int> greedy(static_cast<size_t>(num_states));
    Vector backup(num_states);
    for (int s = 0; s < num_states; ++s) {
      greedy[s] = ArgminLowestIndex(q, s, std::nullopt);
      backup[s] = q(s, greedy[s]);
    }
    const Vector gain = backup - h;
    const double lo = gain.minCoeff();
    const double hi = gain.maxCoeff();
    if (hi - lo <= eps) {
      return {DeterministicPolicy(std::move(greedy), num_actions), lo, hi,
              sweep};
    }
    h = backup - Vector::Constant(num_states, backup[0]);
  }
  throw SolverError("relative value iteration did not certify the eps gap");
}

DeterministicPolicy EpsilonBestResponse(const MdpModel& model,
                                        const LossVector& loss, double eps) {
  return SolveEpsilonBestResponse(model, loss, eps).policy;
}

MixingCertificate MixingTimeBound(const MdpModel& model) {
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  double delta = 0.0;
  for (int s = 0; s < num_states; ++s) {
    for (int s2 = s + 1; s2 < num_states; ++s2) {
      for (int a = 0; a < num_actions; ++a) {
        for (int b = 0; b < num_actions; ++b) {
          const double dist =
              0.5 * (model.row(s, a) - model.row(s2, b)).lpNorm<1>();
          delta = std::max(delta, dist);
        }
      }
    }
  }
  delta = std::min(delta, 1.0);
  MixingCertificate cert;
  cert.delta_max = delta;
  if (delta <= 0.0) {
    cert.tau = 0.0;
  } else if (delta < 1.0) {
    cert.tau = -1.0 / std::log(delta);
  } else {
    cert.tau = std::numeric_limits<double>::infinity();
  }
  return cert;
}

Vector PropagateDistribution(const MdpModel& model, const Vector& v_prev,
                             const StochasticPolicy& next_policy) {
  CheckPolicyShape(model, next_policy);
  if (v_prev.size() != model.num_pairs()) {
    throw ConfigError("propagate: joint distribution has the wrong size");
  }
  const Vector state_next = model.transition().transpose() * v_prev;
  Vector out(model.num_pairs());
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < model.num_actions(); ++a) {
      out[PairIndex(s, a, model.num_actions())] =
          next_policy(s, a) * state_next[s];
    }
  }
  return out;
}

Vector InitialJointDistribution(const MdpModel& model,
                                const StochasticPolicy& policy) {
  CheckPolicyShape(model, policy);
  Vector out(model.num_pairs());
  for (int s = 0; s < model.num_states(); ++s) {
    for (int a = 0; a < model.num_actions(); ++a) {
      out[PairIndex(s, a, model.num_actions())] =
          model.initial_dist()[s] * policy(s, a);
    }
  }
  return out;
}

std::uint64_t CountDeterministicPolicies(const MdpModel& model) {
  std::uint64_t count = 1;
  const auto base = static_cast<std::uint64_t>(model.num_actions());
  for (int s = 0; s < model.num_states(); ++s) {
    if (count > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= base;
  }
  return count;
}

std::vector<DeterministicPolicy> EnumerateDeterministicPolicies(
    const MdpModel& model, std::uint64_t limit) {
  const std::uint64_t count = CountDeterministicPolicies(model);
  if (count > limit) {
    throw SizeGuardError("|A|^|S| = " + std::to_string(count) +
                         " exceeds the enumeration limit " +
                         std::to_string(limit));
  }
  const int num_states = model.num_states();
  const int num_actions = model.num_actions();
  std::vector<DeterministicPolicy> out;
  out.reserve(count);
  std::vector<int> digits(static_cast<size_t>(num_states), 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.emplace_back(digits, num_actions);
    for (int s = num_states - 1; s >= 0; --s) {
      if (++digits[s] < num_actions) break;
      digits[s] = 0;
    }
  }
  return out;
}

}  // namespace omdp
