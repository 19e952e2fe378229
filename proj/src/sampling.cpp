#include "nsync/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace nsync {

namespace {

constexpr double kProbabilityTol = 1e-12;
constexpr double kEnumerationLimit = 1e6;

IndexSet canonicalize(IndexSet set, int n, int set_number) {
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end())
    throw std::invalid_argument("scheme: set " + std::to_string(set_number) +
                                " contains a duplicate index");
  if (!set.empty() && (set.front() < 0 || set.back() >= n))
    throw std::invalid_argument("scheme: set " + std::to_string(set_number) +
                                " has an index outside [1, n]");
  return set;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

SamplingScheme SamplingScheme::build(int n, std::vector<IndexSet> sets, Vector q, int tau) {
  if (n < 1) throw std::invalid_argument("scheme: n must be at least 1");
  if (tau < 1) throw std::invalid_argument("scheme: tau must be at least 1");
  if (sets.empty()) throw std::invalid_argument("scheme: needs at least one set");
  if (q.size() != static_cast<Eigen::Index>(sets.size()))
    throw std::invalid_argument("scheme: q and sets disagree in length");

  SamplingScheme scheme;
  scheme.n_ = n;
  scheme.tau_ = tau;
  scheme.sets_.reserve(sets.size());

  std::vector<char> covered(static_cast<size_t>(n), 0);
  for (size_t j = 0; j < sets.size(); ++j) {
    IndexSet set = canonicalize(std::move(sets[j]), n, static_cast<int>(j) + 1);
    if (static_cast<int>(set.size()) < tau)
      throw std::invalid_argument("scheme: set " + std::to_string(j + 1) +
                                  " has fewer than tau elements");
    for (int i : set) covered[static_cast<size_t>(i)] = 1;
    scheme.sets_.push_back(std::move(set));
  }
  for (int i = 0; i < n; ++i) {
    if (!covered[static_cast<size_t>(i)])
      throw std::invalid_argument("scheme: sets do not cover coordinate " +
                                  std::to_string(i + 1));
  }

  double q_sum = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    if (!(q[j] > 0.0))
      throw std::invalid_argument("scheme: q[" + std::to_string(j + 1) +
                                  "] must be strictly positive");
    q_sum += q[j];
  }
  if (std::abs(q_sum - 1.0) > kProbabilityTol)
    throw std::invalid_argument("scheme: q must sum to 1");
  scheme.q_ = std::move(q);

  scheme.marginals_ = Vector::Zero(n);
  for (size_t j = 0; j < scheme.sets_.size(); ++j) {
    const double weight =
        scheme.q_[static_cast<Eigen::Index>(j)] * tau / static_cast<double>(scheme.sets_[j].size());
    for (int i : scheme.sets_[j]) scheme.marginals_[i] += weight;
  }
  return scheme;
}

SamplingScheme SamplingScheme::serial(const Vector& p) {
  const int n = static_cast<int>(p.size());
  if (n < 1) throw std::invalid_argument("serial scheme: p must be nonempty");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0))
      throw std::invalid_argument("serial scheme: p[" + std::to_string(i + 1) +
                                  "] must be strictly positive");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kProbabilityTol)
    throw std::invalid_argument("serial scheme: p must sum to 1");

  std::vector<IndexSet> sets(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) sets[static_cast<size_t>(i)] = {i};
  SamplingScheme scheme = build(n, std::move(sets), p, 1);
  scheme.marginals_ = p;  // exact, no roundtrip through Eq. 8 arithmetic
  return scheme;
}

SamplingScheme SamplingScheme::fully_parallel(int n) {
  if (n < 1) throw std::invalid_argument("fully parallel scheme: n must be at least 1");
  IndexSet all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  Vector q(1);
  q[0] = 1.0;
  return build(n, {std::move(all)}, std::move(q), n);
}

IndexSet SamplingScheme::draw(Rng& rng) const {
  // Inverse-CDF pick of the tier-one set.
  size_t j = sets_.size() - 1;
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (size_t k = 0; k < sets_.size(); ++k) {
    cumulative += q_[static_cast<Eigen::Index>(k)];
    if (u < cumulative) {
      j = k;
      break;
    }
  }

  // Partial Fisher-Yates: uniform over cardinality-tau subsets of S_j.
  IndexSet pool = sets_[j];
  const size_t size = pool.size();
  for (int k = 0; k < tau_; ++k) {
    const size_t pick = static_cast<size_t>(k) +
                        static_cast<size_t>(rng.uniform_below(size - static_cast<size_t>(k)));
    std::swap(pool[static_cast<size_t>(k)], pool[pick]);
  }
  pool.resize(static_cast<size_t>(tau_));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::pair<IndexSet, double>> SamplingScheme::enumerate_distribution() const {
  double total = 0.0;
  for (const auto& set : sets_) total += binomial(static_cast<int>(set.size()), tau_);
  if (total > kEnumerationLimit)
    throw std::invalid_argument("enumerate_distribution: more than 10^6 subsets");

  std::map<IndexSet, double> atoms;
  IndexSet subset(static_cast<size_t>(tau_));
  for (size_t j = 0; j < sets_.size(); ++j) {
    const auto& set = sets_[j];
    const double weight =
        q_[static_cast<Eigen::Index>(j)] / binomial(static_cast<int>(set.size()), tau_);
    // Iterate all tau-combinations of `set` via a running index vector.
    std::vector<int> choice(static_cast<size_t>(tau_));
    for (int k = 0; k < tau_; ++k) choice[static_cast<size_t>(k)] = k;
    const int size = static_cast<int>(set.size());
    for (;;) {
      for (int k = 0; k < tau_; ++k)
        subset[static_cast<size_t>(k)] = set[static_cast<size_t>(choice[static_cast<size_t>(k)])];
      atoms[subset] += weight;
      int pos = tau_ - 1;
      while (pos >= 0 && choice[static_cast<size_t>(pos)] == size - tau_ + pos) --pos;
      if (pos < 0) break;
      ++choice[static_cast<size_t>(pos)];
      for (int k = pos + 1; k < tau_; ++k)
        choice[static_cast<size_t>(k)] = choice[static_cast<size_t>(k - 1)] + 1;
    }
  }

  return {atoms.begin(), atoms.end()};
}

}  // namespace nsync
