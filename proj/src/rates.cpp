#include "nsync/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace nsync {

namespace {

constexpr double kArgmaxTieTol = 1e-11;

void require_positive(const Vector& u, const char* name) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0))
      throw std::invalid_argument(std::string(name) + " must be strictly positive");
  }
}

}  // namespace

LambdaResult lambda_constant(const Vector& w, const Vector& p, const Vector& v) {
  if (w.size() != p.size() || w.size() != v.size())
    throw std::invalid_argument("lambda: w, p, v must have equal length");
  if (w.size() == 0) throw std::invalid_argument("lambda: empty input");
  require_positive(w, "lambda: w");
  require_positive(p, "lambda: p");
  require_positive(v, "lambda: v");

  LambdaResult result;
  Vector ratios = w.cwiseQuotient(p.cwiseProduct(v));
  result.value = ratios.maxCoeff();
  const double cutoff = result.value * (1.0 - kArgmaxTieTol);
  for (Eigen::Index i = 0; i < ratios.size(); ++i) {
    if (ratios[i] >= cutoff) result.argmax.push_back(static_cast<int>(i));
  }
  return result;
}

long long iteration_bound(double lambda, double gamma, double initial_gap, double epsilon,
                          double rho) {
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("iteration_bound: lambda and gamma must be positive");
  if (!(epsilon > 0.0) || epsilon >= initial_gap)
    throw std::invalid_argument("iteration_bound: need 0 < epsilon < initial gap");
  if (!(rho > 0.0) || !(rho < 1.0))
    throw std::invalid_argument("iteration_bound: rho must lie in (0,1)");
  const double bound = lambda / gamma * std::log(initial_gap / (epsilon * rho));
  return static_cast<long long>(std::ceil(bound));
}

double lambda_lower_bound(const Vector& w, const Vector& v, double expected_size) {
  if (w.size() != v.size()) throw std::invalid_argument("lower bound: w, v must match");
  require_positive(w, "lower bound: w");
  require_positive(v, "lower bound: v");
  if (!(expected_size > 0.0))
    throw std::invalid_argument("lower bound: expected size must be positive");
  return w.cwiseQuotient(v).sum() / expected_size;
}

ClosedFormConstants closed_form_constants(const Objective& prob) {
  const Vector ratios = prob.lipschitz().cwiseQuotient(prob.weights());
  const double n = static_cast<double>(prob.dim());
  const double max_ratio = ratios.maxCoeff();
  ClosedFormConstants constants;
  constants.lambda_os = n + ratios.sum();
  constants.lambda_us = n + n * max_ratio;
  constants.lambda_fp = prob.separability_degree() * (1.0 + max_ratio);
  return constants;
}

RateReport rate_report(const Vector& w, const Vector& p, const Vector& v, double gamma,
                       double expected_size, std::optional<double> initial_gap,
                       std::optional<double> epsilon, std::optional<double> rho) {
  if (!(gamma > 0.0)) throw std::invalid_argument("rate report: gamma must be positive");
  RateReport report;
  LambdaResult lambda = lambda_constant(w, p, v);
  report.lambda = lambda.value;
  report.argmax = std::move(lambda.argmax);
  report.lower_bound = lambda_lower_bound(w, v, expected_size);
  report.mu = gamma / report.lambda;
  if (!(report.mu > 0.0) || report.mu > 1.0 + 1e-12)
    throw std::runtime_error(
        "rate report: mu = gamma/lambda exceeds 1; stepsizes and marginals are inconsistent "
        "with the strong convexity modulus");
  if (initial_gap && epsilon && rho) {
    report.initial_gap = initial_gap;
    report.epsilon = epsilon;
    report.rho = rho;
    report.iterations = iteration_bound(report.lambda, gamma, *initial_gap, *epsilon, *rho);
  }
  return report;
}

}  // namespace nsync
