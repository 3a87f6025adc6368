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

#ifndef OMDP_ADVERSARY_H_
#define OMDP_ADVERSARY_H_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "omdp/types.h"

namespace omdp {

// The adversary's pure loss vectors l_1..l_L.
class LossSet {
 public:
  explicit LossSet(std::vector<LossVector> vertices);

  int size() const { return static_cast<int>(vertices_.size()); }
  int num_states() const { return vertices_.front().num_states(); }
  int num_actions() const { return vertices_.front().num_actions(); }
  const LossVector& operator[](int i) const {
    return vertices_[static_cast<size_t>(i)];
  }
  const std::vector<LossVector>& vertices() const { return vertices_; }

  // ⟨l_i, d⟩ for every vertex.
  Vector Payoffs(const OccupancyMeasure& d) const;
  // (1/L) Σ_i l_i.
  LossVector VertexAverage() const;
  // Rows are vertices: an L x (|S|·|A|) matrix.
  const Matrix& AsMatrix() const { return matrix_; }

 private:
  std::vector<LossVector> vertices_;
  Matrix matrix_;
};

// Simplex weights x over the L vertices.
class AdversaryMixture {
 public:
  explicit AdversaryMixture(Vector weights);

  static AdversaryMixture Uniform(int size);
  static AdversaryMixture PointMass(int size, int index);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[i]; }
  const Vector& weights() const { return weights_; }

 private:
  Vector weights_;
};

// μ_t = min(cap, √(8 ln L / t)) (anytime) or √(8 ln L / T) (fixed horizon).
struct StepSchedule {
  enum class Kind { kAnytime, kFixedHorizon };

  Kind kind = Kind::kAnytime;
  std::int64_t horizon = 0;
  double cap = std::numeric_limits<double>::infinity();

  double StepSize(std::int64_t t, int num_vertices) const;
  // First round with μ_t ≤ threshold, or -1 if none within max_rounds.
  std::int64_t FirstRoundAtOrBelow(double threshold, int num_vertices,
                                   std::int64_t max_rounds) const;
};

struct AdversaryState {
  AdversaryMixture mixture;
  // Round whose loss `mixture` produces (1-based).
  std::int64_t round = 1;
  StepSchedule schedule;
};

// Gain-form MWU: x'(i) ∝ x(i) exp(μ_t ⟨l_i, d⟩).
AdversaryState MwuAdversaryStep(const AdversaryState& state,
                                const LossSet& losses,
                                const OccupancyMeasure& feedback);

// l = Σ_i x_i l_i.
LossVector RealizedLoss(const AdversaryMixture& mixture, const LossSet& losses);

// Point mass on argmax_i ⟨l_i, d⟩, lowest index on ties.
AdversaryMixture BestResponseAdversaryStep(const LossSet& losses,
                                           const OccupancyMeasure& feedback);

struct AdversaryRound {
  AdversaryMixture mixture;
  Vector payoffs;  // ⟨l_i, d_{π_t}⟩ for every vertex
};

// max_i Σ_t ⟨l_i, d_t⟩ − Σ_t ⟨l_t, d_t⟩; zero for an empty history.
double AdversaryExternalRegret(std::span<const AdversaryRound> history);

double Entropy(const AdversaryMixture& mixture);
// RE(p‖q) = Σ p_i ln(p_i / q_i), with 0 ln 0 = 0.
double RelativeEntropy(const AdversaryMixture& p, const AdversaryMixture& q);

// Stateful adversary used by the simulation loop: MWU, a best-responding
// baseline, or an oblivious one drawing seeded random mixtures. Copies replay
// identically, which counterfactual comparisons rely on.
class Adversary {
 public:
  enum class Kind { kMwu, kBestResponse, kOblivious };

  static Adversary Mwu(int num_vertices, StepSchedule schedule);
  static Adversary BestResponder(int num_vertices);
  static Adversary Oblivious(int num_vertices, std::uint64_t seed);

  Kind kind() const { return kind_; }
  const AdversaryMixture& mixture() const { return state_.mixture; }
  std::int64_t round() const { return state_.round; }
  const StepSchedule& schedule() const { return state_.schedule; }
  // Step size the MWU update will use at the current round.
  double CurrentStepSize(int num_vertices) const;

  // Consumes the agent's stationary distribution for the current round and
  // advances to the next one.
  void Observe(const LossSet& losses, const OccupancyMeasure& feedback);

 private:
  Adversary(Kind kind, AdversaryState state, std::uint64_t seed);

  AdversaryMixture DrawOblivious();

  Kind kind_;
  AdversaryState state_;
  std::mt19937_64 rng_;
};

}  // namespace omdp

#endif  // OMDP_ADVERSARY_H_
