#pragma once

#include "nsync/types.hpp"

namespace nsync {

/// Dense two-phase primal simplex for min c'x s.t. Ax = b, x >= 0.
///
/// Bland's smallest-index rule for both entering and leaving variables, so
/// the pivot sequence is deterministic and cycling-free. Meant for tiny
/// instances (tens of rows/columns); everything is kept in one tableau.
struct SimplexResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  Vector x;
  double objective = 0.0;
};

SimplexResult simplex_solve(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace nsync
