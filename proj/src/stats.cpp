#include "nsync/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nsync {

namespace {

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double f = d;
  for (int k = 1; k < 500; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("regularized_gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_pvalue(double stat, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected, double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: observed and expected must match");

  std::vector<size_t> order(observed.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return expected[a] < expected[b]; });

  std::vector<double> obs_buckets, exp_buckets;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (size_t idx : order) {
    obs_acc += observed[idx];
    exp_acc += expected[idx];
    if (exp_acc >= min_expected) {
      obs_buckets.push_back(obs_acc);
      exp_buckets.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0) {
    // leftover tail joins the last bucket
    if (exp_buckets.empty()) throw std::invalid_argument("chi_square_gof: too few expected counts");
    obs_buckets.back() += obs_acc;
    exp_buckets.back() += exp_acc;
  }

  ChiSquareResult result;
  result.buckets = static_cast<int>(exp_buckets.size());
  for (size_t k = 0; k < exp_buckets.size(); ++k) {
    const double diff = obs_buckets[k] - exp_buckets[k];
    result.statistic += diff * diff / exp_buckets[k];
  }
  result.dof = std::max(1, result.buckets - 1);
  result.p_value = result.buckets < 2 ? 1.0 : chi_square_pvalue(result.statistic, result.dof);
  return result;
}

}  // namespace nsync
