#include "nsync/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "nsync/io.hpp"
#include "nsync/probabilities.hpp"
#include "nsync/rates.hpp"

namespace nsync {

namespace {

void shuffle_indices(std::vector<int>& values, Rng& rng) {
  for (size_t k = values.size(); k > 1; --k) {
    const size_t pick = static_cast<size_t>(rng.uniform_below(k));
    std::swap(values[k - 1], values[pick]);
  }
}

void append_trace_rows(CsvWriter* csv, const std::string& method, std::optional<int> omega,
                       const std::vector<Trace>& traces, int n) {
  for (size_t run = 0; run < traces.size(); ++run) {
    for (const auto& point : traces[run].points) {
      const double epoch = static_cast<double>(point.coord_updates) / n;
      const double residual = std::max(0.0, point.residual);
      std::vector<std::string> cells;
      cells.push_back(method);
      if (omega) cells.push_back(std::to_string(*omega));
      cells.push_back(std::to_string(run));
      cells.push_back(format_double(epoch));
      cells.push_back(format_double(residual));
      csv->row(cells);
    }
  }
}

void append_summary_rows(CsvWriter* csv, const std::string& method, std::optional<int> omega,
                         const std::vector<Trace>& traces, int n) {
  const auto bands = ensemble_percentiles(traces, {0.025, 0.5, 0.975});
  for (size_t pt = 0; pt < bands.size(); ++pt) {
    const double epoch =
        static_cast<double>(traces.front().points[pt].coord_updates) / n;
    std::vector<std::string> cells;
    cells.push_back(method);
    if (omega) cells.push_back(std::to_string(*omega));
    cells.push_back(format_double(epoch));
    for (double value : bands[pt]) cells.push_back(format_double(std::max(0.0, value)));
    csv->row(cells);
  }
}

}  // namespace

Vector parse_v_profile(const std::string& profile, int n) {
  if (n < 1) throw std::invalid_argument("v profile: n must be at least 1");
  if (profile == "ones") return Vector::Ones(n);
  constexpr std::string_view kSpiked = "spiked:";
  if (profile.rfind(kSpiked, 0) == 0) {
    double spike = 0.0;
    try {
      spike = std::stod(profile.substr(kSpiked.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("v profile: cannot parse \"" + profile + "\"");
    }
    if (!(spike > 0.0)) throw std::invalid_argument("v profile: spike must be positive");
    Vector v = Vector::Ones(n);
    v[0] = spike;
    return v;
  }
  throw std::invalid_argument("v profile: unknown profile \"" + profile +
                              "\" (expected \"ones\" or \"spiked:<v1>\")");
}

ProblemSpec generate_instance(const GeneratorConfig& cfg) {
  if (cfg.m < 1 || cfg.n < 1)
    throw std::invalid_argument("generate_instance: m and n must be at least 1");
  if (cfg.omega < 1 || cfg.omega > cfg.n)
    throw std::invalid_argument("generate_instance: omega must lie in [1, n]");
  if (static_cast<long long>(cfg.m) * cfg.omega < cfg.n)
    throw std::invalid_argument(
        "generate_instance: m*omega < n, rows cannot cover every column");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("generate_instance: gamma must be positive");
  const Vector v = parse_v_profile(cfg.v_profile, cfg.n);

  Rng rng = Rng::derive(cfg.seed, 0);

  // Cover every column first: deal a shuffled column order round-robin over a
  // shuffled row order, then top rows up to omega nonzeros each.
  std::vector<int> columns(static_cast<size_t>(cfg.n));
  std::iota(columns.begin(), columns.end(), 0);
  shuffle_indices(columns, rng);
  std::vector<int> row_order(static_cast<size_t>(cfg.m));
  std::iota(row_order.begin(), row_order.end(), 0);
  shuffle_indices(row_order, rng);

  std::vector<std::vector<char>> member(
      static_cast<size_t>(cfg.m), std::vector<char>(static_cast<size_t>(cfg.n), 0));
  for (int k = 0; k < cfg.n; ++k) {
    const int row = row_order[static_cast<size_t>(k % cfg.m)];
    member[static_cast<size_t>(row)][static_cast<size_t>(columns[static_cast<size_t>(k)])] = 1;
  }
  for (int row = 0; row < cfg.m; ++row) {
    auto& flags = member[static_cast<size_t>(row)];
    int count = static_cast<int>(std::count(flags.begin(), flags.end(), 1));
    std::vector<int> candidates;
    for (int i = 0; i < cfg.n; ++i) {
      if (!flags[static_cast<size_t>(i)]) candidates.push_back(i);
    }
    while (count < cfg.omega) {
      const size_t pick = static_cast<size_t>(rng.uniform_below(candidates.size()));
      flags[static_cast<size_t>(candidates[pick])] = 1;
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
      ++count;
    }
  }

  Matrix A = Matrix::Zero(cfg.m, cfg.n);
  for (int row = 0; row < cfg.m; ++row) {
    for (int i = 0; i < cfg.n; ++i) {
      if (member[static_cast<size_t>(row)][static_cast<size_t>(i)]) A(row, i) = rng.normal();
    }
  }
  for (int i = 0; i < cfg.n; ++i) {
    const double norm = A.col(i).norm();
    if (!(norm > 0.0))
      throw std::runtime_error("generate_instance: a column collapsed to zero");
    A.col(i) /= norm;
  }

  Vector b(cfg.m);
  for (int j = 0; j < cfg.m; ++j) b[j] = rng.normal();

  return ProblemSpec::least_squares(std::move(A), std::move(b), cfg.gamma, v);
}

std::string summary_path(const std::string& out) {
  constexpr std::string_view kCsv = ".csv";
  if (out.size() > kCsv.size() &&
      out.compare(out.size() - kCsv.size(), kCsv.size(), kCsv) == 0)
    return out.substr(0, out.size() - kCsv.size()) + ".summary.csv";
  return out + ".summary.csv";
}

LeftExperimentResult experiment_left(const LeftExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("experiment_left: runs must be at least 1");
  if (cfg.iters < 1) throw std::invalid_argument("experiment_left: iters must be at least 1");
  constexpr int kRows = 2;
  constexpr int kDim = 30;

  // Stream 0 builds the instance; run streams start at offset 1.
  Rng rng = Rng::derive(cfg.seed, 0);
  Matrix A(kRows, kDim);
  for (int j = 0; j < kRows; ++j)
    for (int i = 0; i < kDim; ++i) A(j, i) = rng.normal();
  for (int i = 0; i < kDim; ++i) A.col(i) /= A.col(i).norm();
  Vector b(kRows);
  for (int j = 0; j < kRows; ++j) b[j] = rng.normal();
  Vector v = Vector::Ones(kDim);
  v[0] = 0.05;

  LeftExperimentResult result;
  result.instance = ProblemSpec::least_squares(std::move(A), std::move(b), 1.0, v);
  const ProblemSpec& prob = result.instance;

  const SamplingScheme scheme_us =
      SamplingScheme::serial(Vector::Constant(kDim, 1.0 / kDim));
  const Vector w_us = eso_stepsizes(prob, scheme_us).w;

  const Vector lipschitz_estimate = cfg.perturb_lipschitz * prob.lipschitz();
  const Vector ratios = (lipschitz_estimate + v).cwiseQuotient(v);
  const SamplingScheme scheme_os = SamplingScheme::serial(ratios / ratios.sum());
  const Vector w_os = lipschitz_estimate + v;

  result.lambda_us = lambda_constant(w_us, scheme_us.marginals(), v).value;
  result.lambda_os = lambda_constant(w_os, scheme_os.marginals(), v).value;

  RunConfig run_cfg;
  run_cfg.max_iters = cfg.iters;
  run_cfg.record_every = cfg.record_every > 0 ? cfg.record_every : kDim;
  run_cfg.seed = cfg.seed + 1;
  result.us_traces = run_ensemble(prob, scheme_us, w_us, run_cfg, cfg.runs);
  run_cfg.seed = cfg.seed + 1 + static_cast<std::uint64_t>(cfg.runs);
  result.os_traces = run_ensemble(prob, scheme_os, w_os, run_cfg, cfg.runs);

  CsvWriter csv;
  csv.metadata("seed", std::to_string(cfg.seed));
  csv.metadata("rng", std::string(Rng::algorithm_id()));
  csv.metadata("instance", instance_hash(prob));
  csv.metadata("config", "runs=" + std::to_string(cfg.runs) +
                             " iters=" + std::to_string(cfg.iters) +
                             " record_every=" + std::to_string(run_cfg.record_every) +
                             " perturb_L=" + format_double(cfg.perturb_lipschitz));
  csv.metadata("method US",
               "scheme=serial(uniform) w-policy=eso(L+v) lambda=" +
                   format_double(result.lambda_us) +
                   " mu=" + format_double(prob.gamma() / result.lambda_us));
  csv.metadata("method OS",
               "scheme=serial(optimal) w-policy=L_est+v lambda=" +
                   format_double(result.lambda_os) +
                   " mu=" + format_double(prob.gamma() / result.lambda_os));
  csv.header({"method", "run", "epoch", "residual"});
  append_trace_rows(&csv, "US", std::nullopt, result.us_traces, kDim);
  append_trace_rows(&csv, "OS", std::nullopt, result.os_traces, kDim);
  csv.save(cfg.out);

  CsvWriter summary;
  summary.metadata("seed", std::to_string(cfg.seed));
  summary.metadata("instance", instance_hash(prob));
  summary.header({"method", "epoch", "p025", "p50", "p975"});
  append_summary_rows(&summary, "US", std::nullopt, result.us_traces, kDim);
  append_summary_rows(&summary, "OS", std::nullopt, result.os_traces, kDim);
  summary.save(summary_path(cfg.out));

  return result;
}

std::vector<RightOmegaResult> experiment_right(const RightExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("experiment_right: runs must be at least 1");
  if (cfg.epochs < 1) throw std::invalid_argument("experiment_right: epochs must be at least 1");
  if (cfg.omegas.empty()) throw std::invalid_argument("experiment_right: needs at least one omega");
  for (int omega : cfg.omegas) {
    if (omega < 1 || omega > cfg.n)
      throw std::invalid_argument("experiment_right: omega must lie in [1, n]");
  }

  CsvWriter csv;
  csv.metadata("seed", std::to_string(cfg.seed));
  csv.metadata("rng", std::string(Rng::algorithm_id()));
  csv.metadata("config", "runs=" + std::to_string(cfg.runs) +
                             " epochs=" + std::to_string(cfg.epochs) +
                             " m=" + std::to_string(cfg.m) + " n=" + std::to_string(cfg.n) +
                             " v_profile=" + cfg.v_profile +
                             " gamma=" + format_double(cfg.gamma));

  CsvWriter summary;
  summary.metadata("seed", std::to_string(cfg.seed));

  std::vector<RightOmegaResult> results;
  // Each omega owns a disjoint block of rng streams: one for the instance,
  // then runs streams per method.
  const std::uint64_t block = 2ULL * static_cast<std::uint64_t>(cfg.runs) + 1;
  for (size_t t = 0; t < cfg.omegas.size(); ++t) {
    const int omega = cfg.omegas[t];
    GeneratorConfig gen;
    gen.n = cfg.n;
    gen.m = std::max(cfg.m, (cfg.n + omega - 1) / omega);
    gen.omega = omega;
    gen.seed = cfg.seed + block * static_cast<std::uint64_t>(t);
    gen.v_profile = cfg.v_profile;
    gen.gamma = cfg.gamma;

    RightOmegaResult result;
    result.omega = omega;
    result.instance = generate_instance(gen);
    const ProblemSpec& prob = result.instance;

    const SamplingScheme scheme_ns = SamplingScheme::serial(optimal_serial(prob));
    const Vector w_ns = prob.lipschitz() + prob.weights();
    const SamplingScheme scheme_fp = SamplingScheme::fully_parallel(cfg.n);
    const Vector w_fp = eso_stepsizes(prob, scheme_fp).w;

    result.lambda_os = lambda_constant(w_ns, scheme_ns.marginals(), prob.weights()).value;
    result.lambda_fp = lambda_constant(w_fp, scheme_fp.marginals(), prob.weights()).value;

    RunConfig run_cfg;
    run_cfg.max_iters = cfg.epochs * static_cast<long long>(cfg.n);
    run_cfg.record_every = cfg.n;
    run_cfg.seed = gen.seed + 1;
    result.ns_traces = run_ensemble(prob, scheme_ns, w_ns, run_cfg, cfg.runs);
    run_cfg.max_iters = cfg.epochs;
    run_cfg.record_every = 1;
    run_cfg.seed = gen.seed + 1 + static_cast<std::uint64_t>(cfg.runs);
    result.fp_traces = run_ensemble(prob, scheme_fp, w_fp, run_cfg, cfg.runs);

    const double mu_ns = prob.gamma() / result.lambda_os;
    const double mu_fp = prob.gamma() / result.lambda_fp;
    csv.metadata(
        "omega " + std::to_string(omega),
        "m=" + std::to_string(gen.m) + " instance=" + instance_hash(prob) +
            " lambda_os=" + format_double(result.lambda_os) +
            " lambda_fp=" + format_double(result.lambda_fp) +
            " w-policy=NS:L+v,FP:eso(omega(L+v))" +
            " contraction_ns=" +
            format_double(std::pow(1.0 - mu_ns, static_cast<double>(cfg.n))) +
            " contraction_fp=" + format_double(1.0 - mu_fp) + " mu_ns=" +
            format_double(mu_ns) + " mu_fp=" + format_double(mu_fp));

    results.push_back(std::move(result));
  }

  csv.header({"method", "omega", "run", "epoch", "residual"});
  summary.header({"method", "omega", "epoch", "p025", "p50", "p975"});
  for (const auto& result : results) {
    append_trace_rows(&csv, "NS", result.omega, result.ns_traces, cfg.n);
    append_trace_rows(&csv, "FP", result.omega, result.fp_traces, cfg.n);
    append_summary_rows(&summary, "NS", result.omega, result.ns_traces, cfg.n);
    append_summary_rows(&summary, "FP", result.omega, result.fp_traces, cfg.n);
  }
  csv.save(cfg.out);
  summary.save(summary_path(cfg.out));

  return results;
}

ValidateReport validate_scheme(const ProblemSpec& prob, const SamplingScheme& scheme,
                               int trials, long long draws, std::uint64_t seed) {
  ValidateReport report;
  const StepSizes steps = eso_stepsizes(prob, scheme);
  Rng eso_rng = Rng::derive(seed, 0);
  report.eso = verify_eso(prob, scheme, steps.w, trials, eso_rng);

  const auto atoms = scheme.enumerate_distribution();
  std::map<IndexSet, size_t> atom_index;
  for (size_t k = 0; k < atoms.size(); ++k) atom_index[atoms[k].first] = k;

  std::vector<double> observed(atoms.size(), 0.0);
  std::vector<double> expected(atoms.size(), 0.0);
  Rng draw_rng = Rng::derive(seed, 1);
  for (long long d = 0; d < draws; ++d) observed[atom_index.at(scheme.draw(draw_rng))] += 1.0;
  for (size_t k = 0; k < atoms.size(); ++k)
    expected[k] = atoms[k].second * static_cast<double>(draws);

  report.draws = draws;
  report.sampling = chi_square_gof(observed, expected);
  report.sampling_ok = report.sampling.p_value >= 1e-3;
  report.ok = report.eso.ok && report.sampling_ok;
  return report;
}

}  // namespace nsync
