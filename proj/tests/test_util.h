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

#ifndef OMDP_TESTS_TEST_UTIL_H_
#define OMDP_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <vector>

#include "omdp/adversary.h"
#include "omdp/harness.h"
#include "omdp/types.h"

namespace omdp::testing {

inline double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline StochasticPolicy RandomPolicy(std::mt19937_64& rng, int S, int A) {
  Matrix m(S, A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) m(s, a) = Unit(rng) + 1e-3;
    m.row(s) /= m.row(s).sum();
  }
  return StochasticPolicy(m);
}

inline DeterministicPolicy RandomDeterministic(std::mt19937_64& rng, int S,
                                               int A) {
  std::vector<int> acts(static_cast<size_t>(S));
  for (auto& a : acts) a = static_cast<int>(rng() % static_cast<unsigned>(A));
  return DeterministicPolicy(acts, A);
}

inline LossVector RandomLoss(std::mt19937_64& rng, int S, int A) {
  Vector l(S * A);
  for (int i = 0; i < l.size(); ++i) l[i] = Unit(rng);
  return LossVector(S, A, l);
}

inline LossVector ConstantLoss(int S, int A, double c) {
  return LossVector(S, A, Vector::Constant(S * A, c));
}

// Single-state model with `A` actions.
inline MdpModel SingleState(int A) {
  return MdpModel(1, A, Matrix::Ones(A, 1));
}

// 1-state, 2-action matching pennies: l1 = (1,0), l2 = (0,1).
inline LossSet MatchingPennies() {
  Vector l1(2), l2(2);
  l1 << 1.0, 0.0;
  l2 << 0.0, 1.0;
  return LossSet({LossVector(1, 2, l1), LossVector(1, 2, l2)});
}

inline MdpModel Model(std::uint64_t seed, int S = 3, int A = 3,
                      double lambda = 0.1) {
  return GenerateModel(seed, S, A, lambda);
}

}  // namespace omdp::testing

#endif  // OMDP_TESTS_TEST_UTIL_H_
