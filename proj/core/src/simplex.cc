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

#include "omdp/simplex.h"

#include <cmath>
#include <limits>
#include <string>

#include "omdp/errors.h"

namespace omdp {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kReducedCostTolerance = 1e-11;
constexpr double kFeasibilityTolerance = 1e-9;
constexpr double kRatioTieTolerance = 1e-12;
constexpr double kZeroTolerance = 1e-13;
constexpr int kBlandAfter = 50;
constexpr int kMaxPivots = 200000;

class Tableau {
 public:
  Tableau(Matrix table, std::vector<int> basis, int num_columns)
      : t_(std::move(table)), basis_(std::move(basis)), cols_(num_columns) {}

  int rows() const { return static_cast<int>(basis_.size()); }
  double rhs(int i) const { return t_(i, cols_); }
  double cost() const { return -t_(rows(), cols_); }
  const std::vector<int>& basis() const { return basis_; }
  Matrix& table() { return t_; }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= rows(); ++i) {
      if (i != row && t_(i, col) != 0.0) {
        t_.row(i) -= t_(i, col) * t_.row(row);
      }
    }
    for (int i = 0; i < rows(); ++i) {
      if (std::abs(t_(i, cols_)) < kZeroTolerance) t_(i, cols_) = 0.0;
    }
    basis_[static_cast<size_t>(row)] = col;
    ++pivots_;
  }

  // Optimizes the objective row in place. Columns with banned[j] never enter.
  void Optimize(const std::vector<bool>& banned) {
    while (true) {
      if (pivots_ > kMaxPivots) throw SolverError("simplex: pivot limit reached");
      // Dantzig pricing; Bland's rule while stalled on a degenerate vertex.
      const bool bland = degenerate_streak_ > kBlandAfter;
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        const double rc = t_(rows(), j);
        if (banned[j] || rc >= -kReducedCostTolerance) continue;
        if (entering < 0 || (!bland && rc < t_(rows(), entering))) {
          entering = j;
          if (bland) break;
        }
      }
      if (entering < 0) return;
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, entering);
        if (a <= kPivotTolerance) continue;
        const double ratio = rhs(i) / a;
        const double tie = kRatioTieTolerance * (1.0 + std::abs(ratio));
        const bool tied = std::abs(ratio - best_ratio) <= tie;
        const bool better_tie =
            bland ? basis_[i] < basis_[leaving]
                  : a > t_(leaving, entering);
        if (leaving < 0 || ratio < best_ratio - tie || (tied && better_tie)) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) throw SolverError("simplex: unbounded program");
      degenerate_streak_ = best_ratio <= kPivotTolerance ? degenerate_streak_ + 1 : 0;
      Pivot(leaving, entering);
    }
  }

  void RemoveRow(int row) {
    const int n = rows();
    Matrix next(n, cols_ + 1);
    int k = 0;
    for (int i = 0; i <= n; ++i) {
      if (i == row) continue;
      next.row(k++) = t_.row(i);
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + row);
  }

  int pivots() const { return pivots_; }

 private:
  Matrix t_;
  std::vector<int> basis_;
  int cols_;
  int pivots_ = 0;
  int degenerate_streak_ = 0;
};

}  // namespace

LpSolution SolveLinearProgram(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.constraints.rows());
  const int n = static_cast<int>(lp.constraints.cols());
  if (lp.objective.size() != n || lp.rhs.size() != m ||
      static_cast<int>(lp.senses.size()) != m) {
    throw ConfigError("linear program: inconsistent dimensions");
  }

  // Standard form with b ≥ 0: rows may be negated, which flips their sense.
  Matrix a = lp.constraints;
  Vector b = lp.rhs;
  std::vector<RowSense> senses = lp.senses;
  std::vector<double> sign(static_cast<size_t>(m), 1.0);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) *= -1.0;
      b[i] = -b[i];
      sign[i] = -1.0;
      if (senses[i] == RowSense::kLessEqual) {
        senses[i] = RowSense::kGreaterEqual;
      } else if (senses[i] == RowSense::kGreaterEqual) {
        senses[i] = RowSense::kLessEqual;
      }
    }
  }

  int num_slack = 0;
  int num_artificial = 0;
  for (RowSense s : senses) {
    if (s != RowSense::kEqual) ++num_slack;
    if (s != RowSense::kLessEqual) ++num_artificial;
  }
  const int cols = n + num_slack + num_artificial;
  const int first_artificial = n + num_slack;

  Matrix standard = Matrix::Zero(m, cols);
  standard.leftCols(n) = a;
  std::vector<int> basis(static_cast<size_t>(m));
  int next_slack = n;
  int next_artificial = first_artificial;
  for (int i = 0; i < m; ++i) {
    switch (senses[i]) {
      case RowSense::kLessEqual:
        standard(i, next_slack) = 1.0;
        basis[i] = next_slack++;
        break;
      case RowSense::kGreaterEqual:
        standard(i, next_slack++) = -1.0;
        standard(i, next_artificial) = 1.0;
        basis[i] = next_artificial++;
        break;
      case RowSense::kEqual:
        standard(i, next_artificial) = 1.0;
        basis[i] = next_artificial++;
        break;
    }
  }

  Matrix table = Matrix::Zero(m + 1, cols + 1);
  table.topLeftCorner(m, cols) = standard;
  table.topRightCorner(m, 1) = b;
  // Phase 1 objective: Σ artificials, priced out against the initial basis.
  for (int j = first_artificial; j < cols; ++j) table(m, j) = 1.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= first_artificial) table.row(m) -= table.row(i);
  }
  Tableau tab(std::move(table), basis, cols);
  std::vector<int> row_of_original(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) row_of_original[i] = i;

  std::vector<bool> banned(static_cast<size_t>(cols), false);
  tab.Optimize(banned);
  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  if (tab.cost() > kFeasibilityTolerance * scale) {
    throw SolverError("simplex: program is infeasible (phase-1 cost " +
                      std::to_string(tab.cost()) + ")");
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (int i = 0; i < tab.rows();) {
    if (tab.basis()[i] < first_artificial) {
      ++i;
      continue;
    }
    int col = -1;
    for (int j = 0; j < first_artificial; ++j) {
      if (std::abs(tab.table()(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.Pivot(i, col);
      ++i;
    } else {
      tab.RemoveRow(i);
      row_of_original.erase(row_of_original.begin() + i);
    }
  }

  // Phase 2.
  for (int j = first_artificial; j < cols; ++j) banned[j] = true;
  Matrix& t = tab.table();
  const int rows = tab.rows();
  t.row(rows).setZero();
  t.row(rows).head(n) = lp.objective.transpose();
  for (int i = 0; i < rows; ++i) {
    const int col = tab.basis()[i];
    const double c = col < n ? lp.objective[col] : 0.0;
    if (c != 0.0) t.row(rows) -= c * t.row(i);
  }
  tab.Optimize(banned);

  LpSolution out;
  out.x = Vector::Zero(n);
  for (int i = 0; i < tab.rows(); ++i) {
    const int col = tab.basis()[i];
    if (col < n) out.x[col] = std::max(tab.rhs(i), 0.0);
  }
  out.objective = lp.objective.dot(out.x);
  out.pivots = tab.pivots();

  // Duals from Bᵀy = c_B over the surviving rows.
  const int k = tab.rows();
  Matrix basis_matrix(k, k);
  Vector basis_cost(k);
  for (int j = 0; j < k; ++j) {
    const int col = tab.basis()[j];
    for (int i = 0; i < k; ++i) {
      basis_matrix(i, j) = standard(row_of_original[i], col);
    }
    basis_cost[j] = col < n ? lp.objective[col] : 0.0;
  }
  const Vector y = basis_matrix.transpose().fullPivLu().solve(basis_cost);
  out.duals = Vector::Zero(m);
  for (int i = 0; i < k; ++i) {
    out.duals[row_of_original[i]] = sign[row_of_original[i]] * y[i];
  }
  return out;
}

}  // namespace omdp
