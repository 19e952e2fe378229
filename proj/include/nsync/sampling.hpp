#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nsync/rng.hpp"
#include "nsync/types.hpp"

namespace nsync {

/// Two-tier random subset sampling over coordinates {0, ..., n-1}:
/// pick set S_j with probability q_j, then a uniform cardinality-tau subset
/// of S_j. Every draw therefore has size exactly tau, so E|S_hat| = tau.
///
/// Marginals p_i = sum_j q_j (tau/|S_j|) [i in S_j] are cached at
/// construction; they are strictly positive because the sets cover [n] and
/// q > 0. Schemes are immutable and safe to share across threads; each Rng
/// must be owned by one thread at a time.
class SamplingScheme {
 public:
  /// Sets may overlap, must cover {0,...,n-1}, and each must have at least
  /// tau elements; q must be strictly positive and sum to 1 (tol 1e-12).
  /// Sets are canonicalized to sorted index arrays.
  static SamplingScheme build(int n, std::vector<IndexSet> sets, Vector q, int tau);

  /// Serial sampling: singleton sets, q = p, tau = 1. Marginals equal p exactly.
  static SamplingScheme serial(const Vector& p);

  /// One set {0,...,n-1} with tau = n; every draw returns all coordinates.
  static SamplingScheme fully_parallel(int n);

  int dim() const { return n_; }
  int tau() const { return tau_; }
  int set_count() const { return static_cast<int>(sets_.size()); }
  const std::vector<IndexSet>& sets() const { return sets_; }
  const Vector& set_probabilities() const { return q_; }
  const Vector& marginals() const { return marginals_; }
  double expected_size() const { return static_cast<double>(tau_); }

  /// One draw of the two-tier law; result is sorted, has size tau, and is
  /// contained in a single S_j. Deterministic given the rng state.
  IndexSet draw(Rng& rng) const;

  /// Full distribution {(S, p_S)} in lexicographic subset order, for testing
  /// oracles. p_S = sum_j q_j [S in S_j, |S| = tau] / C(|S_j|, tau).
  /// Guarded by sum_j C(|S_j|, tau) <= 10^6.
  std::vector<std::pair<IndexSet, double>> enumerate_distribution() const;

 private:
  SamplingScheme() = default;

  int n_ = 0;
  int tau_ = 0;
  std::vector<IndexSet> sets_;
  Vector q_;
  Vector marginals_;
};

/// Binomial coefficient in double precision (exact for the small arguments
/// the enumeration guard admits).
double binomial(int n, int k);

}  // namespace nsync
