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

#ifndef OMDP_SIMPLEX_H_
#define OMDP_SIMPLEX_H_

#include <vector>

#include "omdp/types.h"

namespace omdp {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// minimize cᵀx  subject to  A x (sense) b,  x ≥ 0.
struct LinearProgram {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  std::vector<RowSense> senses;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  // Multipliers with bᵀy = cᵀx and c − Aᵀy ≥ 0 at the optimum; y_i ≤ 0 on
  // ≤ rows, ≥ 0 on ≥ rows. Redundant equality rows get 0.
  Vector duals;
  int pivots = 0;
};

// Dense two-phase tableau simplex with Bland's rule. Throws SolverError on
// infeasible or unbounded programs.
LpSolution SolveLinearProgram(const LinearProgram& lp);

}  // namespace omdp

#endif  // OMDP_SIMPLEX_H_
