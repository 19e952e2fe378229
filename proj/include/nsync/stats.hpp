#pragma once

#include <vector>

namespace nsync {

/// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a),
/// by power series for x < a+1 and Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-square distribution: P(X >= stat).
double chi_square_pvalue(double stat, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int buckets = 0;  // cells after pooling
};

/// Pearson goodness-of-fit with small expected cells pooled (ascending by
/// expected count) until every bucket has at least `min_expected`.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected = 5.0);

}  // namespace nsync
