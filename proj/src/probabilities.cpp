#include "nsync/probabilities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nsync/sampling.hpp"
#include "nsync/simplex.hpp"

namespace nsync {

namespace {

constexpr double kQFloor = 1e-9;
constexpr double kFeasSlack = 1e-9;

void require_row_coverage(const Matrix& B) {
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    if (B.row(i).maxCoeff() <= 0.0)
      throw std::invalid_argument("optimal_q: coordinate " + std::to_string(i + 1) +
                                  " is not covered by any set");
  }
}

// Candidate evaluation shared by the oracle paths: clips tiny negatives,
// renormalizes, and scores by the exact maximin value.
void consider(const Matrix& B, Vector q, LPSolution* best) {
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    if (q[j] < 0.0) {
      if (q[j] < -kFeasSlack) return;
      q[j] = 0.0;
    }
  }
  const double total = q.sum();
  if (!(total > 0.0)) return;
  q /= total;
  const double alpha = (B * q).minCoeff();
  if (best->q.size() == 0 || alpha > best->alpha) {
    best->q = std::move(q);
    best->alpha = alpha;
  }
}

void grid_search(const Matrix& B, int coords, int subdivisions, Vector& point, int next,
                 int remaining, LPSolution* best) {
  if (next == coords - 1) {
    point[next] = static_cast<double>(remaining) / subdivisions;
    consider(B, point, best);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    point[next] = static_cast<double>(k) / subdivisions;
    grid_search(B, coords, subdivisions, point, next + 1, remaining - k, best);
  }
}

}  // namespace

Vector optimal_serial(const Objective& prob) {
  const Vector ratios =
      (prob.lipschitz() + prob.weights()).cwiseQuotient(prob.weights());
  return ratios / ratios.sum();
}

LPInstance lp_instance(const Objective& prob, std::vector<IndexSet> sets, int tau) {
  const int n = prob.dim();
  if (tau < 1) throw std::invalid_argument("lp_instance: tau must be at least 1");
  if (sets.empty()) throw std::invalid_argument("lp_instance: needs at least one set");

  std::vector<char> covered(static_cast<size_t>(n), 0);
  for (size_t j = 0; j < sets.size(); ++j) {
    auto& set = sets[j];
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw std::invalid_argument("lp_instance: set " + std::to_string(j + 1) +
                                  " contains a duplicate index");
    if (!set.empty() && (set.front() < 0 || set.back() >= n))
      throw std::invalid_argument("lp_instance: set " + std::to_string(j + 1) +
                                  " has an index outside [1, n]");
    if (static_cast<int>(set.size()) < tau)
      throw std::invalid_argument("lp_instance: set " + std::to_string(j + 1) +
                                  " has fewer than tau elements");
    for (int i : set) covered[static_cast<size_t>(i)] = 1;
  }
  for (int i = 0; i < n; ++i) {
    if (!covered[static_cast<size_t>(i)])
      throw std::invalid_argument("lp_instance: sets do not cover coordinate " +
                                  std::to_string(i + 1));
  }

  LPInstance instance;
  const Vector scale = prob.weights().cwiseQuotient(prob.lipschitz() + prob.weights());
  instance.B.setZero(n, static_cast<Eigen::Index>(sets.size()));
  for (size_t j = 0; j < sets.size(); ++j) {
    const double inv_size = 1.0 / static_cast<double>(sets[j].size());
    for (int i : sets[j]) instance.B(i, static_cast<Eigen::Index>(j)) = scale[i] * inv_size;
  }
  instance.sets = std::move(sets);
  instance.tau = tau;
  return instance;
}

LPSolution optimal_q(const LPInstance& instance) {
  const int n = static_cast<int>(instance.B.rows());
  const int c = static_cast<int>(instance.B.cols());
  require_row_coverage(instance.B);

  // Standard form over z = (q, alpha, s):
  //   b_i' q - alpha - s_i = 0   (row per coordinate)
  //   sum_j q_j = 1
  // maximizing alpha; optimal alpha is positive, so alpha >= 0 is harmless.
  const int vars = c + 1 + n;
  Matrix A = Matrix::Zero(n + 1, vars);
  Vector rhs = Vector::Zero(n + 1);
  Vector cost = Vector::Zero(vars);
  for (int i = 0; i < n; ++i) {
    A.block(i, 0, 1, c) = instance.B.row(i);
    A(i, c) = -1.0;
    A(i, c + 1 + i) = -1.0;
  }
  A.block(n, 0, 1, c).setOnes();
  rhs[n] = 1.0;
  cost[c] = -1.0;

  const SimplexResult lp = simplex_solve(A, rhs, cost);
  if (lp.status != SimplexResult::Status::optimal)
    throw std::runtime_error("optimal_q: simplex failed on a nonempty bounded program");

  LPSolution solution;
  solution.q = lp.x.head(c).cwiseMax(kQFloor);
  solution.q /= solution.q.sum();
  solution.alpha = (instance.B * solution.q).minCoeff();
  return solution;
}

LPSolution optimal_q_bruteforce(const LPInstance& instance, int grid) {
  const int n = static_cast<int>(instance.B.rows());
  const int c = static_cast<int>(instance.B.cols());
  if (c > 4) throw std::invalid_argument("optimal_q_bruteforce: supports c <= 4 only");
  require_row_coverage(instance.B);
  const Matrix& B = instance.B;

  LPSolution best;
  if (c == 1) {
    best.q = Vector::Ones(1);
    best.alpha = B.col(0).minCoeff();
    return best;
  }

  // Vertex candidates: pick which q_j vanish and which rows are tight, then
  // solve the square system {q_j = 0, b_i'q = alpha, sum q = 1}.
  std::vector<int> zero_mask(static_cast<size_t>(c));
  for (int mask = 0; mask < (1 << c); ++mask) {
    int zeros = 0;
    for (int j = 0; j < c; ++j) zeros += (mask >> j) & 1;
    const int tight = c - zeros;
    if (tight < 1 || tight > n) continue;

    std::vector<int> rows(static_cast<size_t>(tight));
    for (int k = 0; k < tight; ++k) rows[static_cast<size_t>(k)] = k;
    for (;;) {
      Matrix system = Matrix::Zero(c + 1, c + 1);  // unknowns (q, alpha)
      Vector target = Vector::Zero(c + 1);
      int row = 0;
      for (int j = 0; j < c; ++j) {
        if ((mask >> j) & 1) system(row++, j) = 1.0;
      }
      for (int k = 0; k < tight; ++k, ++row) {
        system.block(row, 0, 1, c) = B.row(rows[static_cast<size_t>(k)]);
        system(row, c) = -1.0;
      }
      system.block(c, 0, 1, c).setOnes();
      target[c] = 1.0;

      const Eigen::FullPivLU<Matrix> lu(system);
      if (lu.isInvertible()) {
        const Vector z = lu.solve(target);
        const Vector q = z.head(c);
        const double alpha = z[c];
        if ((B * q).minCoeff() >= alpha - kFeasSlack) consider(B, q, &best);
      }

      int pos = tight - 1;
      while (pos >= 0 && rows[static_cast<size_t>(pos)] == n - tight + pos) --pos;
      if (pos < 0) break;
      ++rows[static_cast<size_t>(pos)];
      for (int k = pos + 1; k < tight; ++k)
        rows[static_cast<size_t>(k)] = rows[static_cast<size_t>(k - 1)] + 1;
    }
  }

  // Simplex grid with roughly `grid` points.
  int subdivisions = 1;
  while (binomial(subdivisions + c - 1, c - 1) < grid) ++subdivisions;
  Vector point(c);
  grid_search(B, c, subdivisions, point, 0, subdivisions, &best);

  return best;
}

}  // namespace nsync
