#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsync/eso.hpp"
#include "nsync/objective.hpp"
#include "nsync/sampling.hpp"

namespace nsync {

/// How partial derivatives are obtained inside a run. Both modes agree to
/// 1e-10 relative per iteration; the incremental mode maintains the residual
/// r = Ax - b and touches only the drawn columns.
enum class GradientMode { recompute, incremental };

struct RunConfig {
  Vector x0;                         // empty means the origin
  long long max_iters = 1000;
  std::optional<double> target_residual;
  std::uint64_t seed = 0;
  long long record_every = 1;
  GradientMode gradient_mode = GradientMode::incremental;
};

struct TracePoint {
  long long iteration = 0;
  long long coord_updates = 0;
  double residual = 0.0;  // phi(x_k) - phi_star
};

struct Trace {
  std::vector<TracePoint> points;
  Vector final_x;
  long long iterations = 0;
  double epochs = 0.0;  // coordinate updates / n
};

/// Runs the synchronous random-subset coordinate descent loop
///   x_{k+1} = x_k - sum_{i in S_hat} (1/w_i) grad_i phi(x_k) e_i,
/// drawing S_hat from `scheme` each iteration. Partial derivatives are read
/// at x_k before any coordinate is written, so updates within an iteration
/// commute. Residuals are recorded against the exact phi_star at iteration 0,
/// every record_every-th iteration, and the final iteration; with
/// target_residual set the run stops at the first recorded residual at or
/// below the target. The rng stream is consumed only by scheme draws, one
/// per iteration. A non-finite or negative-beyond-roundoff residual aborts:
/// it signals stepsizes too small for the sampling.
Trace nsync_run(const ProblemSpec& prob, const SamplingScheme& scheme, const Vector& w,
                const RunConfig& cfg);

/// Same, with phi_star supplied by the caller (saves refactorizing when many
/// runs share a problem).
Trace nsync_run(const ProblemSpec& prob, const SamplingScheme& scheme, const Vector& w,
                const RunConfig& cfg, double phi_star);

struct ExpectedDecrease {
  double expected_value = 0.0;   // E[phi(x + h_[S])], exact over atoms
  double certified_bound = 0.0;  // phi(x) - mu (phi(x) - phi_star)
};

/// One-step contraction certificate at state x with h = -w^{-1} . grad phi(x):
/// the exact expectation must not exceed phi(x) - (gamma/Lambda)(phi(x)-phi*).
/// Throws when the certificate fails beyond 1e-9 relative slack.
ExpectedDecrease nsync_expected_decrease(const ProblemSpec& prob, const SamplingScheme& scheme,
                                         const Vector& w, const Vector& x);

/// Independent runs with per-run streams derived from cfg.seed (run r uses
/// stream index r). Runs execute concurrently; the result is identical to the
/// sequential order regardless of scheduling.
std::vector<Trace> run_ensemble(const ProblemSpec& prob, const SamplingScheme& scheme,
                                const Vector& w, const RunConfig& cfg, int runs);

/// Percentiles (linear interpolation between order statistics) of the
/// residuals across traces at each recorded point. All traces must share the
/// same recording pattern, as run_ensemble guarantees.
std::vector<std::vector<double>> ensemble_percentiles(const std::vector<Trace>& traces,
                                                      const std::vector<double>& levels);

}  // namespace nsync
