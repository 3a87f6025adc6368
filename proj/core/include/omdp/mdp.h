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

#ifndef OMDP_MDP_H_
#define OMDP_MDP_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "omdp/types.h"

namespace omdp {

// P(π)_{s,s'} = Σ_a π(a|s) P(s'|s,a).
Matrix InducedChain(const MdpModel& model, const StochasticPolicy& policy);

// Unique stationary distribution of a row-stochastic chain. Solved directly
// from (I - Pᵀ + 1·1ᵀ)x = 1, falling back to power iteration when the direct
// residual is above 1e-12. Throws ErgodicityError when the chain has no unique
// stationary distribution.
Vector StationaryStateDist(const Matrix& chain);

// d(s,a) = d̃_π(s) π(a|s).
OccupancyMeasure OccupancyOfPolicy(const MdpModel& model,
                                   const StochasticPolicy& policy);

// Largest absolute flow-constraint violation of d under the model.
double FlowResidual(const MdpModel& model, const OccupancyMeasure& d);

// π(a|s) = d(s,a) / Σ_a d(s,a); states without mass get the uniform row.
// Throws InvalidOccupancyError when the flow constraints are violated by
// more than 1e-8.
StochasticPolicy PolicyOfOccupancy(const MdpModel& model,
                                   const OccupancyMeasure& d);

// η = ⟨l, d⟩.
double AverageLoss(const OccupancyMeasure& d, const LossVector& loss);

// Average-reward Poisson solve for (π, l).
BiasSolution SolveBias(const MdpModel& model, const StochasticPolicy& policy,
                       const LossVector& loss);

// Per-state action masks; allowed[s][a] is true when a may be chosen in s.
using ActionMask = std::vector<std::vector<bool>>;

// Loss-minimizing deterministic policy by policy iteration. Ties go to the
// lowest action index. With a mask, the search is restricted to the allowed
// actions (every state needs at least one).
DeterministicPolicy BestResponse(const MdpModel& model, const LossVector& loss,
                                 const std::optional<ActionMask>& allowed =
                                     std::nullopt);

// Relative value iteration result. For the greedy policy π,
// lower_bound ≤ min_π' η(π') and η(π) ≤ upper_bound.
struct EpsilonBestResponseResult {
  DeterministicPolicy policy;
  double lower_bound;
  double upper_bound;
  int sweeps;
};

EpsilonBestResponseResult SolveEpsilonBestResponse(const MdpModel& model,
                                                   const LossVector& loss,
                                                   double eps);

// Policy whose average loss is within eps of optimal.
DeterministicPolicy EpsilonBestResponse(const MdpModel& model,
                                        const LossVector& loss, double eps);

// δ_max = ½ max_{s≠s', a, b} ‖P(·|s,a) − P(·|s',b)‖₁, an upper bound on the
// Dobrushin coefficient of every induced chain.
MixingCertificate MixingTimeBound(const MdpModel& model);

// v'(s',a') = π(a'|s') Σ_{s,a} v(s,a) P(s'|s,a).
Vector PropagateDistribution(const MdpModel& model, const Vector& v_prev,
                             const StochasticPolicy& next_policy);

// Joint distribution of the first round: μ₀(s) π(a|s).
Vector InitialJointDistribution(const MdpModel& model,
                                const StochasticPolicy& policy);

// |A|^|S|, saturating at UINT64_MAX.
std::uint64_t CountDeterministicPolicies(const MdpModel& model);

// All deterministic policies in lexicographic order (state 0 is the most
// significant digit). Throws SizeGuardError above `limit`.
std::vector<DeterministicPolicy> EnumerateDeterministicPolicies(
    const MdpModel& model, std::uint64_t limit = 10000);

}  // namespace omdp

#endif  // OMDP_MDP_H_
