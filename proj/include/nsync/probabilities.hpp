#pragma once

#include <vector>

#include "nsync/objective.hpp"

namespace nsync {

/// Optimal serial probabilities p_i proportional to (L_i + v_i)/v_i; these
/// equalize the ratios w_i/(p_i v_i) under serial stepsizes w = L + v.
Vector optimal_serial(const Objective& prob);

/// Maximin program for designing q over fixed sets:
///   max alpha  s.t.  alpha <= b_i' q for all i,  q >= 0,  sum_j q_j = 1,
/// with b_ij = (v_i/(L_i+v_i)) [i in S_j] / |S_j|.
struct LPInstance {
  Matrix B;                        // n x c, rows b_i
  std::vector<IndexSet> sets;
  int tau = 0;
};

LPInstance lp_instance(const Objective& prob, std::vector<IndexSet> sets, int tau);

struct LPSolution {
  Vector q;
  double alpha = 0.0;
};

/// Solves the maximin program by two-phase simplex. Zero entries of the
/// optimal vertex are floored at 1e-9 and q renormalized (the sampling needs
/// q > 0 to keep every marginal positive); alpha is recomputed from the
/// returned q, so alpha = min_i b_i' q holds by construction.
LPSolution optimal_q(const LPInstance& instance);

/// Independent oracle for c <= 4: evaluates every candidate vertex (all ways
/// of making c constraints tight) plus a simplex grid of roughly `grid`
/// points, and returns the best feasible q found. Lower-bounds the true
/// optimum by feasibility.
LPSolution optimal_q_bruteforce(const LPInstance& instance, int grid);

}  // namespace nsync
