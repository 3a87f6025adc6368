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

#ifndef OMDP_TYPES_H_
#define OMDP_TYPES_H_

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace omdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Tolerance used when validating probability vectors and kernels.
inline constexpr double kProbabilityTolerance = 1e-12;
// Tolerance on Σ d = 1 for occupancy measures.
inline constexpr double kOccupancyTolerance = 1e-10;

// Row-major (s, a) flattening shared by losses, occupancy measures and the
// JSON documents.
inline int PairIndex(int state, int action, int num_actions) {
  return state * num_actions + action;
}

// Finite average-reward MDP with a known kernel.
//
// The kernel is stored as an (|S|·|A|) x |S| matrix whose row s·|A|+a is
// P(·|s,a). Construction validates every row and the initial distribution.
class MdpModel {
 public:
  MdpModel(int num_states, int num_actions, Matrix transition,
           Vector initial_dist);

  // Uniform initial distribution.
  MdpModel(int num_states, int num_actions, Matrix transition);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int num_pairs() const { return num_states_ * num_actions_; }

  double p(int s, int a, int next) const {
    return transition_(PairIndex(s, a, num_actions_), next);
  }
  auto row(int s, int a) const {
    return transition_.row(PairIndex(s, a, num_actions_));
  }
  const Matrix& transition() const { return transition_; }
  const Vector& initial_dist() const { return initial_dist_; }

 private:
  int num_states_;
  int num_actions_;
  Matrix transition_;
  Vector initial_dist_;
};

class DeterministicPolicy;

// π(a|s), one row per state.
class StochasticPolicy {
 public:
  explicit StochasticPolicy(Matrix action_probs);

  static StochasticPolicy Uniform(int num_states, int num_actions);

  int num_states() const { return static_cast<int>(probs_.rows()); }
  int num_actions() const { return static_cast<int>(probs_.cols()); }
  double operator()(int s, int a) const { return probs_(s, a); }
  const Matrix& probs() const { return probs_; }

  bool operator==(const StochasticPolicy& other) const {
    return probs_ == other.probs_;
  }

 private:
  Matrix probs_;
};

class DeterministicPolicy {
 public:
  DeterministicPolicy(std::vector<int> chosen_action, int num_actions);

  int num_states() const { return static_cast<int>(actions_.size()); }
  int num_actions() const { return num_actions_; }
  int operator[](int s) const { return actions_[static_cast<size_t>(s)]; }
  const std::vector<int>& actions() const { return actions_; }

  StochasticPolicy ToStochastic() const;

  bool operator==(const DeterministicPolicy&) const = default;

 private:
  std::vector<int> actions_;
  int num_actions_;
};

// Joint stationary distribution d(s,a). Flow constraints depend on the model
// and are checked by the operations that need them.
class OccupancyMeasure {
 public:
  OccupancyMeasure(int num_states, int num_actions, Vector mass);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double operator()(int s, int a) const {
    return mass_[PairIndex(s, a, num_actions_)];
  }
  const Vector& mass() const { return mass_; }
  // d̃(s) = Σ_a d(s,a).
  Vector StateMarginal() const;

 private:
  int num_states_;
  int num_actions_;
  Vector mass_;
};

// Loss per (s,a) in [0,1].
class LossVector {
 public:
  LossVector(int num_states, int num_actions, Vector loss);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double operator()(int s, int a) const {
    return loss_[PairIndex(s, a, num_actions_)];
  }
  const Vector& values() const { return loss_; }

 private:
  int num_states_;
  int num_actions_;
  Vector loss_;
};

// Average loss, bias and Q-values of a (policy, loss) pair, normalized so
// that Σ d_π(s,a) Q(s,a) = 0.
struct BiasSolution {
  double eta = 0.0;
  Vector bias;  // h(s) = Σ_a π(a|s) Q(s,a)
  Matrix q;     // |S| x |A|
};

struct MixingCertificate {
  double delta_max = 1.0;
  // τ = -1/ln(δ_max); 0 when δ_max = 0 and +inf when δ_max = 1.
  double tau = std::numeric_limits<double>::infinity();

  bool bounded() const { return delta_max < 1.0; }
  // τ clamped from below, as used for learning rates and bounds.
  double EffectiveTau(double floor) const;
};

}  // namespace omdp

#endif  // OMDP_TYPES_H_
