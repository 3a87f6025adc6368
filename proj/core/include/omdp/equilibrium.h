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

#ifndef OMDP_EQUILIBRIUM_H_
#define OMDP_EQUILIBRIUM_H_

#include <cstdint>
#include <vector>

#include "omdp/adversary.h"
#include "omdp/types.h"

namespace omdp {

// Saddle point of min_{d ∈ occupancy polytope} max_{x ∈ Δ_L} ⟨Σ x_i l_i, d⟩.
struct EquilibriumSolution {
  double value;
  OccupancyMeasure agent_occupancy;
  StochasticPolicy agent_policy;
  AdversaryMixture adversary_mixture;
  // max_i ⟨l_i, d*⟩ − min_π η_{l*}(π), certified ≤ 1e-6.
  double duality_gap;
};

// Solves the occupancy-measure LP
//   min t  s.t. ⟨l_i, d⟩ ≤ t ∀i, flow constraints, Σ d = 1, d ≥ 0
// and recovers l* from the multipliers of the epigraph rows. Throws
// NumericalError when the certificate fails.
EquilibriumSolution SolveGame(const MdpModel& model, const LossSet& losses);

// The game in pure-strategy form: rows are deterministic policies, columns
// are loss vertices, payoff[i][j] = ⟨l_j, d_{π_i}⟩.
struct MatrixGameSolution {
  double value;
  std::vector<DeterministicPolicy> policies;
  Matrix payoff;
  Vector row_mixture;
  Vector column_mixture;
};

// Brute-force oracle; throws SizeGuardError above `limit` pure policies.
MatrixGameSolution MatrixGameOracle(const MdpModel& model,
                                    const LossSet& losses,
                                    std::uint64_t limit = 10000);

// Agent side: max_i ⟨l_i, d⟩ − v.
double AgentExploitability(const OccupancyMeasure& d, const LossSet& losses,
                           double value);

// Adversary side: v − min_π η_{l(x)}(π).
double AdversaryExploitability(const AdversaryMixture& mixture,
                               const LossSet& losses, const MdpModel& model,
                               double value);

// Smallest ε for which (x, d) is an ε-Nash equilibrium:
//   max(max_i ⟨l_i, d⟩ − ⟨l(x), d⟩, ⟨l(x), d⟩ − min_π η_{l(x)}(π)).
double EpsilonNeCertify(const OccupancyMeasure& d,
                        const AdversaryMixture& mixture, const LossSet& losses,
                        const MdpModel& model);

struct SupportReport {
  int agent_support_size;
  int adversary_support_size;
  double threshold;
};

SupportReport ComputeSupportReport(const MdpModel& model, const LossSet& losses,
                                   double threshold = 1e-9);

}  // namespace omdp

#endif  // OMDP_EQUILIBRIUM_H_
