#pragma once

#include <vector>

#include "nsync/types.hpp"

namespace nsync {

struct Solution {
  Vector x_star;
  double phi_star = 0.0;
};

/// Smooth strongly convex objective phi(x) = f(x) + (gamma/2) * sum_i v_i x_i^2
/// with f partially separable over index groups and coordinatewise Lipschitz
/// gradients. Only the least-squares instance ships concrete (ProblemSpec),
/// but stepsize and probability design depend on this surface alone.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  /// Partial derivative of phi at x along coordinate i.
  virtual double partial_derivative(const Vector& x, int i) const = 0;

  virtual const Vector& lipschitz() const = 0;   // L, for f only
  virtual const Vector& weights() const = 0;     // v
  virtual double gamma() const = 0;
  virtual const std::vector<IndexSet>& groups() const = 0;
  virtual int separability_degree() const = 0;   // omega
};

/// Regularized least squares: f(x) = (1/2)||Ax - b||^2.
///
/// L_i is the squared norm of column i, groups are the row supports of A
/// (empty rows dropped), omega the largest row support. Columns of A must be
/// nonzero; gamma and v strictly positive. Instances are immutable and safe
/// to share across threads.
class ProblemSpec final : public Objective {
 public:
  static ProblemSpec least_squares(Matrix A, Vector b, double gamma, Vector v);

  int dim() const override { return static_cast<int>(A_.cols()); }
  int rows() const { return static_cast<int>(A_.rows()); }
  const Matrix& matrix() const { return A_; }
  const Vector& rhs() const { return b_; }

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double partial_derivative(const Vector& x, int i) const override;

  const Vector& lipschitz() const override { return L_; }
  const Vector& weights() const override { return v_; }
  double gamma() const override { return gamma_; }
  const std::vector<IndexSet>& groups() const override { return groups_; }
  int separability_degree() const override { return omega_; }

  /// Exact minimizer via the normal equations (A^T A + gamma Diag(v)) x = A^T b.
  /// The system matrix is positive definite, so a dense LDLT solve suffices
  /// at desk scale.
  Solution minimizer() const;

  /// Problem in variables y = Diag(d) x: column i of A scaled by 1/d_i, v_i by
  /// 1/d_i^2. Groups and omega are unchanged; the ratios L_i/v_i are invariant.
  ProblemSpec rescaled(const Vector& d) const;

 private:
  ProblemSpec() = default;

  Matrix A_;
  Vector b_;
  double gamma_ = 0.0;
  Vector v_;
  Vector L_;
  std::vector<IndexSet> groups_;
  int omega_ = 0;
};

}  // namespace nsync
