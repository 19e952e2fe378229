#pragma once

#include <optional>
#include <vector>

#include "nsync/objective.hpp"
#include "nsync/rng.hpp"
#include "nsync/sampling.hpp"

namespace nsync {

/// Inverse stepsizes w for the coordinate update -(1/w_i) grad_i phi(x).
struct StepSizes {
  Vector w;
  std::optional<double> theta;        // set by the theta-uniform construction
  std::vector<int> omega_restricted;  // omega_j per sampling set
};

/// omega_j = max_J |J intersect S_j| over the objective's groups, per set.
std::vector<int> omega_restricted(const Objective& prob, const SamplingScheme& scheme);

/// Smallest certified stepsizes for the two-tier sampling:
///   w_i = (L_i + v_i)/p_i * sum_j q_j (tau/|S_j|) [i in S_j]
///         * (1 + (tau-1)(omega_j-1)/max{1,|S_j|-1}).
/// Valid when the regularizer modulus gamma does not exceed 1; the curvature
/// bound behind the per-set factor uses L + v.
StepSizes eso_stepsizes(const Objective& prob, const SamplingScheme& scheme);

/// Uniform variant w_i = theta (L_i + v_i) with
/// theta = max_j (1 + (tau-1)(omega_j-1)/max{1,|S_j|-1}); dominates
/// eso_stepsizes elementwise.
StepSizes theta_stepsizes(const Objective& prob, const SamplingScheme& scheme);

/// Both sides of the ESO inequality for one concrete (x, h) pair, with the
/// expectation over subsets taken exactly. slack = (rhs - lhs)/scale.
struct EsoSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 1.0;
  double slack = 0.0;
};

EsoSides eso_sides(const Objective& prob, const SamplingScheme& scheme, const Vector& w,
                   const Vector& x, const Vector& h);

struct EsoTrialReport {
  bool ok = true;
  /// Smallest (rhs - lhs)/scale over all trials; negative beyond -1e-9 fails.
  double worst_slack = 0.0;
  int worst_trial = -1;
  Vector worst_x;
  Vector worst_h;
  int trials = 0;
};

/// Checks E[phi(x + h_[S])] <= phi(x) + <grad phi(x), h>_p + (1/2)||h||^2_{p.w}
/// on random (x, h) pairs with i.i.d. standard normal entries. The expectation
/// over S is computed exactly from enumerate_distribution, so randomness
/// enters only through the trial pairs.
EsoTrialReport verify_eso(const Objective& prob, const SamplingScheme& scheme,
                          const Vector& w, int trials, Rng& rng);

}  // namespace nsync
