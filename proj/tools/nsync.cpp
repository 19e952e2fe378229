#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsync/eso.hpp"
#include "nsync/experiments.hpp"
#include "nsync/io.hpp"
#include "nsync/probabilities.hpp"
#include "nsync/rates.hpp"
#include "nsync/solver.hpp"

namespace {

using nlohmann::json;

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error(out + ": cannot open file for writing");
    file << text;
  }
}

nsync::Vector stepsizes_for(const std::string& policy, const nsync::ProblemSpec& prob,
                            const nsync::SamplingScheme& scheme) {
  if (policy == "eso") return nsync::eso_stepsizes(prob, scheme).w;
  if (policy == "theta") return nsync::theta_stepsizes(prob, scheme).w;
  throw std::runtime_error("unknown w-policy \"" + policy + "\" (expected eso or theta)");
}

int run_gen(const nsync::GeneratorConfig& cfg, const std::string& out) {
  nsync::save_instance(nsync::generate_instance(cfg), out);
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& scheme_path,
              const std::string& policy, long long iters, long long record_every,
              std::uint64_t seed, int runs, std::optional<double> target,
              const std::string& out) {
  const nsync::ProblemSpec prob = nsync::load_instance(instance_path);
  const nsync::SamplingScheme scheme = nsync::load_scheme(scheme_path);
  const nsync::Vector w = stepsizes_for(policy, prob, scheme);

  nsync::RunConfig cfg;
  cfg.max_iters = iters;
  cfg.record_every = record_every;
  cfg.seed = seed;
  cfg.target_residual = target;
  const auto traces = nsync::run_ensemble(prob, scheme, w, cfg, runs);

  const auto rates = nsync::rate_report(w, scheme.marginals(), prob.weights(), prob.gamma(),
                                        scheme.expected_size());
  nsync::CsvWriter csv;
  csv.metadata("seed", std::to_string(seed));
  csv.metadata("rng", std::string(nsync::Rng::algorithm_id()));
  csv.metadata("instance", nsync::instance_hash(prob));
  csv.metadata("scheme", "c=" + std::to_string(scheme.set_count()) +
                             " tau=" + std::to_string(scheme.tau()));
  csv.metadata("w-policy", policy);
  csv.metadata("lambda", nsync::format_double(rates.lambda));
  csv.metadata("mu", nsync::format_double(rates.mu));
  csv.header({"run", "iter", "coord_updates", "epoch", "residual"});
  for (size_t run = 0; run < traces.size(); ++run) {
    for (const auto& point : traces[run].points) {
      csv.row({std::to_string(run), std::to_string(point.iteration),
               std::to_string(point.coord_updates),
               nsync::format_double(static_cast<double>(point.coord_updates) / prob.dim()),
               nsync::format_double(point.residual)});
    }
  }
  if (out.empty()) {
    std::cout << csv.content();
  } else {
    csv.save(out);
  }
  return 0;
}

int run_rates(const std::string& instance_path, const std::string& scheme_path,
              const std::string& policy, std::optional<double> epsilon,
              std::optional<double> rho, const std::string& out) {
  const nsync::ProblemSpec prob = nsync::load_instance(instance_path);
  const nsync::SamplingScheme scheme = nsync::load_scheme(scheme_path);
  const nsync::Vector w = stepsizes_for(policy, prob, scheme);

  std::optional<double> gap;
  if (epsilon && rho) {
    const nsync::Solution sol = prob.minimizer();
    gap = prob.value(nsync::Vector::Zero(prob.dim())) - sol.phi_star;
  }
  const auto report = nsync::rate_report(w, scheme.marginals(), prob.weights(), prob.gamma(),
                                         scheme.expected_size(), gap, epsilon, rho);

  json doc;
  doc["lambda"] = report.lambda;
  doc["mu"] = report.mu;
  doc["lower_bound"] = report.lower_bound;
  json argmax = json::array();
  for (int i : report.argmax) argmax.push_back(i + 1);
  doc["argmax"] = std::move(argmax);
  if (report.iterations) {
    doc["K"] = *report.iterations;
    doc["epsilon"] = *report.epsilon;
    doc["rho"] = *report.rho;
    doc["initial_gap"] = *report.initial_gap;
  }
  const auto closed = nsync::closed_form_constants(prob);
  doc["closed_form"] = {{"lambda_os", closed.lambda_os},
                        {"lambda_us", closed.lambda_us},
                        {"lambda_fp", closed.lambda_fp}};
  doc["w_policy"] = policy;
  emit(doc, out);
  return 0;
}

int run_optq(const std::string& instance_path, const std::string& sets_path,
             const std::string& out) {
  const nsync::ProblemSpec prob = nsync::load_instance(instance_path);
  nsync::SetsFile sets = nsync::load_sets(sets_path);
  const auto instance = nsync::lp_instance(prob, std::move(sets.sets), sets.tau);
  const auto solution = nsync::optimal_q(instance);

  const auto scheme =
      nsync::SamplingScheme::build(prob.dim(), instance.sets, solution.q, instance.tau);
  const auto steps = nsync::theta_stepsizes(prob, scheme);
  const double lambda = (*steps.theta / instance.tau) / solution.alpha;

  json doc;
  doc["q"] = std::vector<double>(solution.q.begin(), solution.q.end());
  doc["alpha"] = solution.alpha;
  doc["theta"] = *steps.theta;
  doc["tau"] = instance.tau;
  doc["lambda"] = lambda;
  emit(doc, out);
  return 0;
}

int run_validate(const std::string& instance_path, const std::string& scheme_path, int trials,
                 long long draws, std::uint64_t seed) {
  const nsync::ProblemSpec prob = nsync::load_instance(instance_path);
  const nsync::SamplingScheme scheme = nsync::load_scheme(scheme_path);
  const auto report = nsync::validate_scheme(prob, scheme, trials, draws, seed);

  std::cout << (report.eso.ok ? "PASS" : "FAIL") << " eso: worst slack "
            << nsync::format_double(report.eso.worst_slack) << " over "
            << report.eso.trials << " trials\n";
  std::cout << (report.sampling_ok ? "PASS" : "FAIL") << " sampling: chi-square "
            << nsync::format_double(report.sampling.statistic) << " on "
            << report.sampling.dof << " dof (p=" << nsync::format_double(report.sampling.p_value)
            << ", " << report.draws << " draws)\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonuniform parallel coordinate descent toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random least-squares instance");
  nsync::GeneratorConfig gen_cfg;
  std::string gen_out = "instance.json";
  gen->add_option("--m", gen_cfg.m, "rows");
  gen->add_option("--n", gen_cfg.n, "columns");
  gen->add_option("--omega", gen_cfg.omega, "nonzeros per row");
  gen->add_option("--seed", gen_cfg.seed, "rng seed");
  gen->add_option("--v-profile", gen_cfg.v_profile, "ones | spiked:<v1>");
  gen->add_option("--gamma", gen_cfg.gamma, "regularization modulus");
  gen->add_option("--out", gen_out, "output instance file");

  // solve
  auto* solve = app.add_subcommand("solve", "run the solver on instance + scheme files");
  std::string solve_instance, solve_scheme, solve_out;
  std::string solve_policy = "eso";
  long long solve_iters = 1000, solve_record = 1;
  std::uint64_t solve_seed = 0;
  int solve_runs = 1;
  double solve_target = 0.0;
  solve->add_option("--instance", solve_instance, "instance file")->required();
  solve->add_option("--scheme", solve_scheme, "scheme file")->required();
  solve->add_option("--w-policy", solve_policy, "eso | theta");
  solve->add_option("--iters", solve_iters, "iterations per run");
  solve->add_option("--record-every", solve_record, "trace thinning");
  solve->add_option("--seed", solve_seed, "base seed");
  solve->add_option("--runs", solve_runs, "independent runs");
  auto* target_opt = solve->add_option("--target", solve_target, "stop at this residual");
  solve->add_option("--out", solve_out, "output CSV (stdout when omitted)");

  // rates
  auto* rates = app.add_subcommand("rates", "report convergence constants");
  std::string rates_instance, rates_scheme, rates_out;
  std::string rates_policy = "eso";
  double rates_eps = 0.0, rates_rho = 0.0;
  rates->add_option("--instance", rates_instance, "instance file")->required();
  rates->add_option("--scheme", rates_scheme, "scheme file")->required();
  rates->add_option("--w-policy", rates_policy, "eso | theta");
  auto* eps_opt = rates->add_option("--epsilon", rates_eps, "target accuracy for K");
  auto* rho_opt = rates->add_option("--rho", rates_rho, "failure probability for K");
  rates->add_option("--out", rates_out, "output file (stdout when omitted)");

  // optq
  auto* optq = app.add_subcommand("optq", "design optimal set probabilities");
  std::string optq_instance, optq_sets, optq_out;
  optq->add_option("--instance", optq_instance, "instance file")->required();
  optq->add_option("--scheme", optq_sets, "sets file (q optional)")->required();
  optq->add_option("--out", optq_out, "output file (stdout when omitted)");

  // validate
  auto* validate = app.add_subcommand("validate", "check the ESO and the sampling fit");
  std::string validate_instance, validate_scheme;
  int validate_trials = 500;
  long long validate_draws = 100000;
  std::uint64_t validate_seed = 0;
  validate->add_option("--instance", validate_instance, "instance file")->required();
  validate->add_option("--scheme", validate_scheme, "scheme file")->required();
  validate->add_option("--trials", validate_trials, "random (x,h) pairs");
  validate->add_option("--draws", validate_draws, "sampling draws");
  validate->add_option("--seed", validate_seed, "rng seed");

  // exp-left
  auto* left = app.add_subcommand("exp-left", "uniform vs optimal serial experiment");
  nsync::LeftExperimentConfig left_cfg;
  left->add_option("--runs", left_cfg.runs, "ensemble size");
  left->add_option("--iters", left_cfg.iters, "iterations per run");
  left->add_option("--seed", left_cfg.seed, "base seed");
  left->add_option("--record-every", left_cfg.record_every, "trace thinning (0 = one epoch)");
  left->add_option("--perturb-L", left_cfg.perturb_lipschitz,
                   "multiplicative L misestimation for OS");
  left->add_option("--out", left_cfg.out, "output CSV");

  // exp-right
  auto* right = app.add_subcommand("exp-right", "nonuniform serial vs fully parallel experiment");
  nsync::RightExperimentConfig right_cfg;
  right->add_option("--omegas", right_cfg.omegas, "row sparsity values")->delimiter(',');
  right->add_option("--runs", right_cfg.runs, "ensemble size");
  right->add_option("--epochs", right_cfg.epochs, "epochs per run");
  right->add_option("--seed", right_cfg.seed, "base seed");
  right->add_option("--m", right_cfg.m, "rows");
  right->add_option("--n", right_cfg.n, "columns");
  right->add_option("--gamma", right_cfg.gamma, "regularization modulus");
  right->add_option("--v-profile", right_cfg.v_profile, "ones | spiked:<v1>");
  right->add_option("--out", right_cfg.out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_cfg, gen_out);
    if (solve->parsed()) {
      std::optional<double> target;
      if (target_opt->count() > 0) target = solve_target;
      return run_solve(solve_instance, solve_scheme, solve_policy, solve_iters, solve_record,
                       solve_seed, solve_runs, target, solve_out);
    }
    if (rates->parsed()) {
      std::optional<double> eps, rho;
      if (eps_opt->count() > 0) eps = rates_eps;
      if (rho_opt->count() > 0) rho = rates_rho;
      return run_rates(rates_instance, rates_scheme, rates_policy, eps, rho, rates_out);
    }
    if (optq->parsed()) return run_optq(optq_instance, optq_sets, optq_out);
    if (validate->parsed())
      return run_validate(validate_instance, validate_scheme, validate_trials, validate_draws,
                          validate_seed);
    if (left->parsed()) {
      nsync::experiment_left(left_cfg);
      return 0;
    }
    if (right->parsed()) {
      nsync::experiment_right(right_cfg);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
