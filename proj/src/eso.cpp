#include "nsync/eso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsync {

namespace {

using Atoms = std::vector<std::pair<IndexSet, double>>;

void check_dims(const Objective& prob, const SamplingScheme& scheme) {
  if (prob.dim() != scheme.dim())
    throw std::invalid_argument("objective and sampling scheme disagree in dimension");
}

double tau_nice_factor(int tau, int omega_j, int set_size) {
  return 1.0 + static_cast<double>(tau - 1) * static_cast<double>(omega_j - 1) /
                   std::max(1, set_size - 1);
}

EsoSides sides_from_atoms(const Objective& prob, const Atoms& atoms, const Vector& p,
                          const Vector& w, const Vector& x, const Vector& h) {
  const int n = prob.dim();
  EsoSides sides;
  Vector shifted(n);
  for (const auto& [subset, p_S] : atoms) {
    shifted = x;
    for (int i : subset) shifted[i] += h[i];
    sides.lhs += p_S * prob.value(shifted);
  }
  const double phi_x = prob.value(x);
  const Vector grad = prob.gradient(x);
  sides.rhs = phi_x;
  for (int i = 0; i < n; ++i)
    sides.rhs += p[i] * grad[i] * h[i] + 0.5 * p[i] * w[i] * h[i] * h[i];
  sides.scale = std::max({1.0, std::abs(phi_x), std::abs(sides.lhs), std::abs(sides.rhs)});
  sides.slack = (sides.rhs - sides.lhs) / sides.scale;
  return sides;
}

}  // namespace

std::vector<int> omega_restricted(const Objective& prob, const SamplingScheme& scheme) {
  check_dims(prob, scheme);
  std::vector<int> result(scheme.sets().size(), 0);
  std::vector<char> member(static_cast<size_t>(scheme.dim()), 0);
  for (size_t j = 0; j < scheme.sets().size(); ++j) {
    for (int i : scheme.sets()[j]) member[static_cast<size_t>(i)] = 1;
    int best = 0;
    for (const auto& group : prob.groups()) {
      int count = 0;
      for (int i : group) count += member[static_cast<size_t>(i)];
      best = std::max(best, count);
    }
    result[j] = best;
    for (int i : scheme.sets()[j]) member[static_cast<size_t>(i)] = 0;
  }
  return result;
}

StepSizes eso_stepsizes(const Objective& prob, const SamplingScheme& scheme) {
  check_dims(prob, scheme);
  StepSizes result;
  result.omega_restricted = omega_restricted(prob, scheme);

  const int tau = scheme.tau();
  Vector accumulated = Vector::Zero(prob.dim());
  for (size_t j = 0; j < scheme.sets().size(); ++j) {
    const auto& set = scheme.sets()[j];
    const double weight = scheme.set_probabilities()[static_cast<Eigen::Index>(j)] * tau /
                          static_cast<double>(set.size()) *
                          tau_nice_factor(tau, result.omega_restricted[j], static_cast<int>(set.size()));
    for (int i : set) accumulated[i] += weight;
  }

  const Vector& L = prob.lipschitz();
  const Vector& v = prob.weights();
  result.w = (L + v).cwiseProduct(accumulated).cwiseQuotient(scheme.marginals());
  return result;
}

StepSizes theta_stepsizes(const Objective& prob, const SamplingScheme& scheme) {
  check_dims(prob, scheme);
  StepSizes result;
  result.omega_restricted = omega_restricted(prob, scheme);

  double theta = 1.0;
  for (size_t j = 0; j < scheme.sets().size(); ++j) {
    theta = std::max(theta, tau_nice_factor(scheme.tau(), result.omega_restricted[j],
                                            static_cast<int>(scheme.sets()[j].size())));
  }
  result.theta = theta;
  result.w = theta * (prob.lipschitz() + prob.weights());
  return result;
}

EsoSides eso_sides(const Objective& prob, const SamplingScheme& scheme, const Vector& w,
                   const Vector& x, const Vector& h) {
  check_dims(prob, scheme);
  if (w.size() != prob.dim()) throw std::invalid_argument("eso_sides: w has wrong length");
  if (x.size() != prob.dim() || h.size() != prob.dim())
    throw std::invalid_argument("eso_sides: x or h has wrong length");
  return sides_from_atoms(prob, scheme.enumerate_distribution(), scheme.marginals(), w, x, h);
}

EsoTrialReport verify_eso(const Objective& prob, const SamplingScheme& scheme,
                          const Vector& w, int trials, Rng& rng) {
  check_dims(prob, scheme);
  if (w.size() != prob.dim()) throw std::invalid_argument("verify_eso: w has wrong length");
  const auto atoms = scheme.enumerate_distribution();
  const Vector& p = scheme.marginals();
  const int n = prob.dim();

  EsoTrialReport report;
  report.trials = trials;
  report.worst_slack = std::numeric_limits<double>::infinity();

  Vector x(n), h(n);
  for (int trial = 0; trial < trials; ++trial) {
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    for (int i = 0; i < n; ++i) h[i] = rng.normal();
    const EsoSides sides = sides_from_atoms(prob, atoms, p, w, x, h);
    if (sides.slack < report.worst_slack) {
      report.worst_slack = sides.slack;
      report.worst_trial = trial;
      report.worst_x = x;
      report.worst_h = h;
    }
  }
  if (trials == 0) report.worst_slack = 0.0;
  report.ok = report.worst_slack >= -1e-9;
  return report;
}

}  // namespace nsync
