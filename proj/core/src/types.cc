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

#include "omdp/types.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "omdp/errors.h"

namespace omdp {
namespace {

void CheckProbabilityVector(const Eigen::Ref<const Vector>& v,
                            const std::string& what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < -kProbabilityTolerance) {
      throw ConfigError(what + ": negative or non-finite entry at index " +
                        std::to_string(i));
    }
  }
  if (std::abs(v.sum() - 1.0) > kProbabilityTolerance) {
    throw ConfigError(what + ": entries sum to " + std::to_string(v.sum()) +
                      ", expected 1");
  }
}

}  // namespace

MdpModel::MdpModel(int num_states, int num_actions, Matrix transition,
                   Vector initial_dist)
    : num_states_(num_states),
      num_actions_(num_actions),
      transition_(std::move(transition)),
      initial_dist_(std::move(initial_dist)) {
  if (num_states_ <= 0 || num_actions_ <= 0) {
    throw ConfigError("MdpModel: state and action counts must be positive");
  }
  if (transition_.rows() != num_pairs() || transition_.cols() != num_states_) {
    throw ConfigError("MdpModel: transition must be (|S|·|A|) x |S|");
  }
  if (initial_dist_.size() != num_states_) {
    throw ConfigError("MdpModel: initial distribution must have |S| entries");
  }
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      CheckProbabilityVector(
          transition_.row(PairIndex(s, a, num_actions_)).transpose(),
          "MdpModel: P(.|" + std::to_string(s) + "," + std::to_string(a) +
              ")");
    }
  }
  CheckProbabilityVector(initial_dist_, "MdpModel: initial distribution");
  transition_ = transition_.cwiseMax(0.0);
  initial_dist_ = initial_dist_.cwiseMax(0.0);
}

MdpModel::MdpModel(int num_states, int num_actions, Matrix transition)
    : MdpModel(num_states, num_actions, std::move(transition),
               Vector::Constant(std::max(num_states, 0),
                                1.0 / std::max(num_states, 1))) {}

StochasticPolicy::StochasticPolicy(Matrix action_probs)
    : probs_(std::move(action_probs)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) {
    throw ConfigError("StochasticPolicy: empty policy");
  }
  for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
    CheckProbabilityVector(probs_.row(s).transpose(),
                           "StochasticPolicy: row " + std::to_string(s));
  }
  probs_ = probs_.cwiseMax(0.0);
}

StochasticPolicy StochasticPolicy::Uniform(int num_states, int num_actions) {
  return StochasticPolicy(
      Matrix::Constant(num_states, num_actions, 1.0 / num_actions));
}

DeterministicPolicy::DeterministicPolicy(std::vector<int> chosen_action,
                                         int num_actions)
    : actions_(std::move(chosen_action)), num_actions_(num_actions) {
  if (actions_.empty() || num_actions_ <= 0) {
    throw ConfigError("DeterministicPolicy: empty policy");
  }
  for (size_t s = 0; s < actions_.size(); ++s) {
    if (actions_[s] < 0 || actions_[s] >= num_actions_) {
      throw ConfigError("DeterministicPolicy: invalid action " +
                        std::to_string(actions_[s]) + " in state " +
                        std::to_string(s));
    }
  }
}

StochasticPolicy DeterministicPolicy::ToStochastic() const {
  Matrix probs = Matrix::Zero(num_states(), num_actions_);
  for (int s = 0; s < num_states(); ++s) probs(s, actions_[s]) = 1.0;
  return StochasticPolicy(std::move(probs));
}

OccupancyMeasure::OccupancyMeasure(int num_states, int num_actions,
                                   Vector mass)
    : num_states_(num_states), num_actions_(num_actions), mass_(std::move(mass)) {
  if (num_states_ <= 0 || num_actions_ <= 0 ||
      mass_.size() != num_states_ * num_actions_) {
    throw ConfigError("OccupancyMeasure: expected |S|·|A| entries");
  }
  for (Eigen::Index i = 0; i < mass_.size(); ++i) {
    if (!std::isfinite(mass_[i]) || mass_[i] < -kOccupancyTolerance) {
      throw ConfigError("OccupancyMeasure: negative entry at index " +
                        std::to_string(i));
    }
  }
  if (std::abs(mass_.sum() - 1.0) > kOccupancyTolerance) {
    throw ConfigError("OccupancyMeasure: mass sums to " +
                      std::to_string(mass_.sum()));
  }
  mass_ = mass_.cwiseMax(0.0);
}

Vector OccupancyMeasure::StateMarginal() const {
  Vector marginal(num_states_);
  for (int s = 0; s < num_states_; ++s) {
    marginal[s] = mass_.segment(s * num_actions_, num_actions_).sum();
  }
  return marginal;
}

LossVector::LossVector(int num_states, int num_actions, Vector loss)
    : num_states_(num_states), num_actions_(num_actions), loss_(std::move(loss)) {
  if (num_states_ <= 0 || num_actions_ <= 0 ||
      loss_.size() != num_states_ * num_actions_) {
    throw ConfigError("LossVector: expected |S|·|A| entries");
  }
  for (Eigen::Index i = 0; i < loss_.size(); ++i) {
    if (!std::isfinite(loss_[i]) || loss_[i] < -kProbabilityTolerance ||
        loss_[i] > 1.0 + kProbabilityTolerance) {
      throw ConfigError("LossVector: entry " + std::to_string(i) +
                        " outside [0,1]");
    }
  }
  loss_ = loss_.cwiseMax(0.0).cwiseMin(1.0);
}

double MixingCertificate::EffectiveTau(double floor) const {
  return std::max(tau, floor);
}

}  // namespace omdp
