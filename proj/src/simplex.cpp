#include "nsync/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nsync {

namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasibilityTol = 1e-8;

struct Tableau {
  Matrix body;              // m x (cols+1), last column is the rhs
  Eigen::RowVectorXd cost_row;  // length cols+1
  std::vector<int> basis;   // basic variable per row
  int rows = 0;
  int cols = 0;

  void pivot(int row, int col) {
    body.row(row) /= body(row, col);
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      const double factor = body(i, col);
      if (factor != 0.0) body.row(i) -= factor * body.row(row);
    }
    const double cost_factor = cost_row[col];
    if (cost_factor != 0.0) cost_row -= cost_factor * body.row(row);
    basis[static_cast<size_t>(row)] = col;
  }

  // Bland's rule iteration over the first `usable` columns.
  // Returns false when no reduced cost is negative (optimal reached).
  bool step(int usable, bool* unbounded) {
    int enter = -1;
    for (int j = 0; j < usable; ++j) {
      if (cost_row[j] < -kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return false;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double coef = body(i, enter);
      if (coef <= kPivotTol) continue;
      const double ratio = body(i, cols) / coef;
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (std::abs(ratio - best_ratio) <= kPivotTol &&
           basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

SimplexResult simplex_solve(const Matrix& A, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex: dimension mismatch");

  Tableau t;
  t.rows = m;
  t.cols = n + m;  // originals plus one artificial per row
  t.body.setZero(m, t.cols + 1);
  t.basis.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    t.body.block(i, 0, 1, n) = sign * A.row(i);
    t.body(i, n + i) = 1.0;
    t.body(i, t.cols) = sign * b[i];
    t.basis[static_cast<size_t>(i)] = n + i;
  }

  // Phase 1: minimize the artificial sum.
  t.cost_row.setZero(t.cols + 1);
  for (int j = n; j < t.cols; ++j) t.cost_row[j] = 1.0;
  for (int i = 0; i < m; ++i) t.cost_row -= t.body.row(i);

  bool unbounded = false;
  while (t.step(t.cols, &unbounded)) {
  }
  const double infeasibility = -t.cost_row[t.cols];
  if (infeasibility > kFeasibilityTol) {
    SimplexResult result;
    result.status = SimplexResult::Status::infeasible;
    return result;
  }

  // Drive leftover artificials out of the basis; a row with no eligible
  // original column is redundant and can keep its (zero) artificial.
  for (int i = 0; i < m; ++i) {
    if (t.basis[static_cast<size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.body(i, j)) > kPivotTol) {
        t.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 over the original columns only.
  t.cost_row.setZero(t.cols + 1);
  t.cost_row.head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int var = t.basis[static_cast<size_t>(i)];
    if (var < n && c[var] != 0.0) t.cost_row -= c[var] * t.body.row(i);
  }
  while (t.step(n, &unbounded)) {
  }

  SimplexResult result;
  if (unbounded) {
    result.status = SimplexResult::Status::unbounded;
    return result;
  }
  result.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int var = t.basis[static_cast<size_t>(i)];
    if (var < n) result.x[var] = t.body(i, t.cols);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace nsync
