#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsync/objective.hpp"

namespace nsync {

/// Lambda = max_i w_i/(p_i v_i), with every index attaining the max within
/// a 1e-11 relative band (probability designs that equalize the ratios tie
/// only up to roundoff).
struct LambdaResult {
  double value = 0.0;
  std::vector<int> argmax;
};

LambdaResult lambda_constant(const Vector& w, const Vector& p, const Vector& v);

/// Smallest K with K >= (lambda/gamma) log(initial_gap/(epsilon rho)), which
/// guarantees Prob(phi(x_K) - phi_star <= epsilon) >= 1 - rho.
/// Requires 0 < epsilon < initial_gap and rho in (0,1).
long long iteration_bound(double lambda, double gamma, double initial_gap, double epsilon,
                          double rho);

/// (sum_i w_i/v_i) / E|S_hat|; Lambda can never fall below this.
double lambda_lower_bound(const Vector& w, const Vector& v, double expected_size);

/// Rate constants of the three canonical samplings with their standard
/// stepsizes: optimal serial, uniform serial, fully parallel.
struct ClosedFormConstants {
  double lambda_os = 0.0;  // n + sum_i L_i/v_i
  double lambda_us = 0.0;  // n + n max_i L_i/v_i
  double lambda_fp = 0.0;  // omega (1 + max_i L_i/v_i)
};

ClosedFormConstants closed_form_constants(const Objective& prob);

struct RateReport {
  double lambda = 0.0;
  double mu = 0.0;          // gamma/lambda
  double lower_bound = 0.0;
  std::vector<int> argmax;
  std::optional<long long> iterations;  // K, when epsilon/rho/initial_gap given
  std::optional<double> epsilon;
  std::optional<double> rho;
  std::optional<double> initial_gap;
};

/// Assembles Lambda, mu = gamma/Lambda and the lower bound for a concrete
/// (w, p, v, gamma); optionally the iteration bound K for a target
/// (epsilon, rho) from a given initial gap. mu must land in (0, 1]; a larger
/// value signals a misconfigured (w, p, v) and raises.
RateReport rate_report(const Vector& w, const Vector& p, const Vector& v, double gamma,
                       double expected_size,
                       std::optional<double> initial_gap = std::nullopt,
                       std::optional<double> epsilon = std::nullopt,
                       std::optional<double> rho = std::nullopt);

}  // namespace nsync
