#include "nsync/objective.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace nsync {

ProblemSpec ProblemSpec::least_squares(Matrix A, Vector b, double gamma, Vector v) {
  const auto m = A.rows();
  const auto n = A.cols();
  if (m < 1 || n < 1) throw std::invalid_argument("least_squares: A must be nonempty");
  if (b.size() != m) throw std::invalid_argument("least_squares: b has wrong length");
  if (v.size() != n) throw std::invalid_argument("least_squares: v has wrong length");
  if (!(gamma > 0.0)) throw std::invalid_argument("least_squares: gamma must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(v[i] > 0.0))
      throw std::invalid_argument("least_squares: v[" + std::to_string(i + 1) +
                                  "] must be positive");
  }

  ProblemSpec spec;
  spec.L_ = A.colwise().squaredNorm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (spec.L_[i] == 0.0)
      throw std::invalid_argument("least_squares: column " + std::to_string(i + 1) +
                                  " of A is zero");
  }

  spec.groups_.reserve(static_cast<size_t>(m));
  int omega = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    IndexSet support;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (A(j, i) != 0.0) support.push_back(static_cast<int>(i));
    }
    if (support.empty()) continue;  // empty rows carry no coupling
    omega = std::max(omega, static_cast<int>(support.size()));
    spec.groups_.push_back(std::move(support));
  }
  spec.omega_ = omega;

  spec.A_ = std::move(A);
  spec.b_ = std::move(b);
  spec.gamma_ = gamma;
  spec.v_ = std::move(v);
  return spec;
}

double ProblemSpec::value(const Vector& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("value: x has wrong length");
  const double residual = (A_ * x - b_).squaredNorm();
  const double reg = v_.cwiseProduct(x.cwiseAbs2()).sum();
  return 0.5 * residual + 0.5 * gamma_ * reg;
}

Vector ProblemSpec::gradient(const Vector& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("gradient: x has wrong length");
  return A_.transpose() * (A_ * x - b_) + gamma_ * v_.cwiseProduct(x);
}

double ProblemSpec::partial_derivative(const Vector& x, int i) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("partial_derivative: x has wrong length");
  if (i < 0 || i >= dim()) throw std::invalid_argument("partial_derivative: index out of range");
  return A_.col(i).dot(A_ * x - b_) + gamma_ * v_[i] * x[i];
}

Solution ProblemSpec::minimizer() const {
  Matrix system = A_.transpose() * A_;
  system.diagonal() += gamma_ * v_;
  const Vector rhs = A_.transpose() * b_;
  Solution sol;
  sol.x_star = system.ldlt().solve(rhs);
  sol.phi_star = value(sol.x_star);
  return sol;
}

ProblemSpec ProblemSpec::rescaled(const Vector& d) const {
  if (d.size() != A_.cols()) throw std::invalid_argument("rescaled: d has wrong length");
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0))
      throw std::invalid_argument("rescaled: d[" + std::to_string(i + 1) +
                                  "] must be positive");
  }
  Matrix A = A_;
  for (Eigen::Index i = 0; i < d.size(); ++i) A.col(i) /= d[i];
  const Vector v = v_.cwiseQuotient(d.cwiseAbs2());
  return least_squares(std::move(A), b_, gamma_, v);
}

}  // namespace nsync
