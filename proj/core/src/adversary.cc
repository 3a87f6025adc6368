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

#include "omdp/adversary.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "omdp/errors.h"
#include "omdp/mdp.h"

namespace omdp {

LossSet::LossSet(std::vector<LossVector> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw ConfigError("LossSet: needs at least one vertex");
  const int num_states = vertices_.front().num_states();
  const int num_actions = vertices_.front().num_actions();
  matrix_.resize(static_cast<Eigen::Index>(vertices_.size()),
                 num_states * num_actions);
  for (size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].num_states() != num_states ||
        vertices_[i].num_actions() != num_actions) {
      throw ConfigError("LossSet: vertex " + std::to_string(i) +
                        " has mismatched dimensions");
    }
    matrix_.row(static_cast<Eigen::Index>(i)) = vertices_[i].values().transpose();
  }
}

Vector LossSet::Payoffs(const OccupancyMeasure& d) const {
  if (d.num_states() != num_states() || d.num_actions() != num_actions()) {
    throw ConfigError("LossSet: occupancy dimensions do not match");
  }
  return matrix_ * d.mass();
}

LossVector LossSet::VertexAverage() const {
  return LossVector(num_states(), num_actions(),
                    matrix_.colwise().mean().transpose());
}

AdversaryMixture::AdversaryMixture(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw ConfigError("AdversaryMixture: empty");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < -kProbabilityTolerance) {
      throw ConfigError("AdversaryMixture: negative weight");
    }
  }
  if (std::abs(weights_.sum() - 1.0) > kProbabilityTolerance) {
    throw ConfigError("AdversaryMixture: weights sum to " +
                      std::to_string(weights_.sum()));
  }
  weights_ = weights_.cwiseMax(0.0);
}

AdversaryMixture AdversaryMixture::Uniform(int size) {
  if (size <= 0) throw ConfigError("AdversaryMixture: size must be positive");
  return AdversaryMixture(Vector::Constant(size, 1.0 / size));
}

AdversaryMixture AdversaryMixture::PointMass(int size, int index) {
  if (size <= 0 || index < 0 || index >= size) {
    throw ConfigError("AdversaryMixture: invalid point mass");
  }
  Vector w = Vector::Zero(size);
  w[index] = 1.0;
  return AdversaryMixture(std::move(w));
}

double StepSchedule::StepSize(std::int64_t t, int num_vertices) const {
  const double log_l = std::log(static_cast<double>(num_vertices));
  double mu = 0.0;
  switch (kind) {
    case Kind::kAnytime:
      mu = std::sqrt(8.0 * log_l / static_cast<double>(std::max<std::int64_t>(t, 1)));
      break;
    case Kind::kFixedHorizon:
      if (horizon <= 0) throw ConfigError("fixed-horizon schedule needs T >= 1");
      mu = std::sqrt(8.0 * log_l / static_cast<double>(horizon));
      break;
  }
  return std::min(mu, cap);
}

std::int64_t StepSchedule::FirstRoundAtOrBelow(double threshold,
                                               int num_vertices,
                                               std::int64_t max_rounds) const {
  for (std::int64_t t = 1; t <= max_rounds; ++t) {
    if (StepSize(t, num_vertices) <= threshold) return t;
  }
  return -1;
}

AdversaryState MwuAdversaryStep(const AdversaryState& state,
                                const LossSet& losses,
                                const OccupancyMeasure& feedback) {
  if (state.mixture.size() != losses.size()) {
    throw ConfigError("MWU: mixture and loss set sizes differ");
  }
  const Vector gains = losses.Payoffs(feedback);
  const double mu = state.schedule.StepSize(state.round, losses.size());
  const double shift = gains.maxCoeff();
  Vector w = state.mixture.weights().array() *
             (mu * (gains.array() - shift)).exp();
  w /= w.sum();
  return AdversaryState{AdversaryMixture(std::move(w)), state.round + 1,
                        state.schedule};
}

LossVector RealizedLoss(const AdversaryMixture& mixture, const LossSet& losses) {
  if (mixture.size() != losses.size()) {
    throw ConfigError("realized loss: mixture and loss set sizes differ");
  }
  Vector l = losses.AsMatrix().transpose() * mixture.weights();
  return LossVector(losses.num_states(), losses.num_actions(), std::move(l));
}

AdversaryMixture BestResponseAdversaryStep(const LossSet& losses,
                                           const OccupancyMeasure& feedback) {
  const Vector gains = losses.Payoffs(feedback);
  int best = 0;
  for (int i = 1; i < losses.size(); ++i) {
    if (gains[i] > gains[best]) best = i;
  }
  return AdversaryMixture::PointMass(losses.size(), best);
}

double AdversaryExternalRegret(std::span<const AdversaryRound> history) {
  if (history.empty()) return 0.0;
  Vector cumulative = Vector::Zero(history.front().payoffs.size());
  double realized = 0.0;
  for (const auto& round : history) {
    cumulative += round.payoffs;
    realized += round.mixture.weights().dot(round.payoffs);
  }
  return cumulative.maxCoeff() - realized;
}

double Entropy(const AdversaryMixture& mixture) {
  double h = 0.0;
  for (int i = 0; i < mixture.size(); ++i) {
    if (mixture[i] > 0.0) h -= mixture[i] * std::log(mixture[i]);
  }
  return h;
}

double RelativeEntropy(const AdversaryMixture& p, const AdversaryMixture& q) {
  if (p.size() != q.size()) throw ConfigError("relative entropy: size mismatch");
  double re = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    re += p[i] * std::log(p[i] / q[i]);
  }
  return re;
}

Adversary::Adversary(Kind kind, AdversaryState state, std::uint64_t seed)
    : kind_(kind), state_(std::move(state)), rng_(seed) {}

Adversary Adversary::Mwu(int num_vertices, StepSchedule schedule) {
  return Adversary(Kind::kMwu,
                   AdversaryState{AdversaryMixture::Uniform(num_vertices), 1,
                                  schedule},
                   0);
}

Adversary Adversary::BestResponder(int num_vertices) {
  return Adversary(Kind::kBestResponse,
                   AdversaryState{AdversaryMixture::Uniform(num_vertices), 1, {}},
                   0);
}

Adversary Adversary::Oblivious(int num_vertices, std::uint64_t seed) {
  Adversary adv(Kind::kOblivious,
                AdversaryState{AdversaryMixture::Uniform(num_vertices), 1, {}},
                seed);
  adv.state_.mixture = adv.DrawOblivious();
  return adv;
}

double Adversary::CurrentStepSize(int num_vertices) const {
  return kind_ == Kind::kMwu ? state_.schedule.StepSize(state_.round, num_vertices)
                             : 0.0;
}

AdversaryMixture Adversary::DrawOblivious() {
  const int size = state_.mixture.size();
  Vector w(size);
  for (int i = 0; i < size; ++i) {
    // 53-bit uniform in (0, 1].
    w[i] = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  return AdversaryMixture(w / w.sum());
}

void Adversary::Observe(const LossSet& losses, const OccupancyMeasure& feedback) {
  switch (kind_) {
    case Kind::kMwu:
      state_ = MwuAdversaryStep(state_, losses, feedback);
      return;
    case Kind::kBestResponse:
      state_.mixture = BestResponseAdversaryStep(losses, feedback);
      ++state_.round;
      return;
    case Kind::kOblivious:
      state_.mixture = DrawOblivious();
      ++state_.round;
      return;
  }
}

}  // namespace omdp
