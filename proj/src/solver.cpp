#include "nsync/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "nsync/rates.hpp"

namespace nsync {

namespace {

void validate_run_inputs(const ProblemSpec& prob, const SamplingScheme& scheme,
                         const Vector& w, const RunConfig& cfg) {
  if (prob.dim() != scheme.dim())
    throw std::invalid_argument("nsync_run: problem and scheme disagree in dimension");
  if (w.size() != prob.dim()) throw std::invalid_argument("nsync_run: w has wrong length");
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) throw std::invalid_argument("nsync_run: w must be strictly positive");
  }
  if (cfg.max_iters < 1) throw std::invalid_argument("nsync_run: max_iters must be at least 1");
  if (cfg.record_every < 1)
    throw std::invalid_argument("nsync_run: record_every must be at least 1");
  if (cfg.x0.size() != 0 && cfg.x0.size() != prob.dim())
    throw std::invalid_argument("nsync_run: x0 has wrong length");
}

double checked_residual(const ProblemSpec& prob, const Vector& x, double phi_star,
                        long long iteration) {
  const double phi = prob.value(x);
  const double gap = phi - phi_star;
  const double scale = std::max({1.0, std::abs(phi), std::abs(phi_star)});
  if (!std::isfinite(gap))
    throw std::runtime_error("nsync_run: non-finite objective at iteration " +
                             std::to_string(iteration) +
                             "; stepsizes are too small for the sampling");
  if (gap < -1e-10 * scale)
    throw std::runtime_error("nsync_run: residual below the optimum at iteration " +
                             std::to_string(iteration) + "; phi_star is inconsistent");
  return gap;
}

}  // namespace

Trace nsync_run(const ProblemSpec& prob, const SamplingScheme& scheme, const Vector& w,
                const RunConfig& cfg) {
  return nsync_run(prob, scheme, w, cfg, prob.minimizer().phi_star);
}

Trace nsync_run(const ProblemSpec& prob, const SamplingScheme& scheme, const Vector& w,
                const RunConfig& cfg, double phi_star) {
  validate_run_inputs(prob, scheme, w, cfg);
  const int n = prob.dim();
  const bool incremental = cfg.gradient_mode == GradientMode::incremental;

  Vector x = cfg.x0.size() == 0 ? Vector::Zero(n) : cfg.x0;
  Vector residual_vec;  // r = Ax - b, maintained in incremental mode
  if (incremental) residual_vec = prob.matrix() * x - prob.rhs();

  Rng rng = Rng::derive(cfg.seed, 0);
  Trace trace;
  trace.points.push_back({0, 0, checked_residual(prob, x, phi_star, 0)});

  long long coord_updates = 0;
  long long k = 0;
  std::vector<double> partials;
  Vector full_gradient;
  const bool stop_on_target =
      cfg.target_residual && trace.points.front().residual <= *cfg.target_residual;

  if (!stop_on_target) {
    for (k = 1; k <= cfg.max_iters; ++k) {
      const IndexSet subset = scheme.draw(rng);

      // Pre-read the partial derivatives at x_k, then write; the coordinate
      // updates of one iteration therefore commute.
      partials.clear();
      if (incremental) {
        for (int i : subset)
          partials.push_back(prob.matrix().col(i).dot(residual_vec) +
                             prob.gamma() * prob.weights()[i] * x[i]);
      } else {
        full_gradient = prob.gradient(x);
        for (int i : subset) partials.push_back(full_gradient[i]);
      }
      for (size_t idx = 0; idx < subset.size(); ++idx) {
        const int i = subset[idx];
        const double delta = -partials[idx] / w[i];
        x[i] += delta;
        if (incremental) residual_vec += prob.matrix().col(i) * delta;
      }
      coord_updates += static_cast<long long>(subset.size());

      const bool record = (k % cfg.record_every == 0) || k == cfg.max_iters;
      if (!record) continue;
      const double gap = checked_residual(prob, x, phi_star, k);
      trace.points.push_back({k, coord_updates, gap});
      if (cfg.target_residual && gap <= *cfg.target_residual) break;
    }
    if (k > cfg.max_iters) k = cfg.max_iters;
  }

  trace.final_x = std::move(x);
  trace.iterations = k;
  trace.epochs = static_cast<double>(coord_updates) / n;
  return trace;
}

ExpectedDecrease nsync_expected_decrease(const ProblemSpec& prob, const SamplingScheme& scheme,
                                         const Vector& w, const Vector& x) {
  if (prob.dim() != scheme.dim())
    throw std::invalid_argument("expected_decrease: problem and scheme disagree in dimension");
  if (w.size() != prob.dim() || x.size() != prob.dim())
    throw std::invalid_argument("expected_decrease: w or x has wrong length");

  const Solution sol = prob.minimizer();
  const double phi_x = prob.value(x);
  const Vector h = -prob.gradient(x).cwiseQuotient(w);

  ExpectedDecrease result;
  Vector shifted(prob.dim());
  for (const auto& [subset, p_S] : scheme.enumerate_distribution()) {
    shifted = x;
    for (int i : subset) shifted[i] += h[i];
    result.expected_value += p_S * prob.value(shifted);
  }

  const double lambda = lambda_constant(w, scheme.marginals(), prob.weights()).value;
  const double mu = prob.gamma() / lambda;
  result.certified_bound = phi_x - mu * (phi_x - sol.phi_star);

  const double scale =
      std::max({1.0, std::abs(phi_x), std::abs(result.expected_value),
                std::abs(result.certified_bound)});
  if (result.expected_value > result.certified_bound + 1e-9 * scale)
    throw std::runtime_error("expected_decrease: the contraction certificate failed");
  return result;
}

std::vector<Trace> run_ensemble(const ProblemSpec& prob, const SamplingScheme& scheme,
                                const Vector& w, const RunConfig& cfg, int runs) {
  if (runs < 1) throw std::invalid_argument("run_ensemble: runs must be at least 1");
  validate_run_inputs(prob, scheme, w, cfg);
  const double phi_star = prob.minimizer().phi_star;

  std::vector<Trace> traces(static_cast<size_t>(runs));
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = std::max(1, std::min<int>(runs, hw == 0 ? 1 : static_cast<int>(hw)));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      for (int r = t; r < runs; r += workers) {
        try {
          RunConfig run_cfg = cfg;
          run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
          traces[static_cast<size_t>(r)] = nsync_run(prob, scheme, w, run_cfg, phi_star);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
  return traces;
}

std::vector<std::vector<double>> ensemble_percentiles(const std::vector<Trace>& traces,
                                                      const std::vector<double>& levels) {
  if (traces.empty()) return {};
  const size_t points = traces.front().points.size();
  for (const auto& trace : traces) {
    if (trace.points.size() != points)
      throw std::invalid_argument("ensemble_percentiles: traces are not aligned");
  }

  std::vector<std::vector<double>> result(points, std::vector<double>(levels.size()));
  std::vector<double> values(traces.size());
  for (size_t pt = 0; pt < points; ++pt) {
    for (size_t r = 0; r < traces.size(); ++r) values[r] = traces[r].points[pt].residual;
    std::sort(values.begin(), values.end());
    for (size_t l = 0; l < levels.size(); ++l) {
      const double rank = levels[l] * static_cast<double>(values.size() - 1);
      const size_t lo = static_cast<size_t>(std::floor(rank));
      const size_t hi = std::min(lo + 1, values.size() - 1);
      const double t = rank - static_cast<double>(lo);
      result[pt][l] = (1.0 - t) * values[lo] + t * values[hi];
    }
  }
  return result;
}

}  // namespace nsync
