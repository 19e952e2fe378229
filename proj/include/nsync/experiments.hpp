#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsync/eso.hpp"
#include "nsync/objective.hpp"
#include "nsync/sampling.hpp"
#include "nsync/solver.hpp"
#include "nsync/stats.hpp"

namespace nsync {

/// Random sparse least-squares generator: every row of A has exactly omega
/// nonzeros, every column is hit at least once, nonzero entries are standard
/// normal and columns are then normalized to unit norm (so L_i = 1).
/// b has standard normal entries. Deterministic given the seed.
struct GeneratorConfig {
  int m = 8;
  int n = 10;
  int omega = 10;
  std::uint64_t seed = 0;
  std::string v_profile = "ones";  // "ones" or "spiked:<v1>" (v_1=<v1>, rest 1)
  double gamma = 1.0;
};

ProblemSpec generate_instance(const GeneratorConfig& cfg);

/// "ones" -> all ones; "spiked:<x>" -> (x, 1, ..., 1).
Vector parse_v_profile(const std::string& profile, int n);

/// Uniform-serial vs optimal-serial comparison on the 2x30 instance with
/// gamma = 1, v = (0.05, 1, ..., 1) and unit-norm columns. Writes the row CSV
/// to `out` and per-epoch percentile bands to summary_path(out).
struct LeftExperimentConfig {
  int runs = 100;
  long long iters = 2400;
  std::uint64_t seed = 1;
  long long record_every = 0;  // 0 means one epoch (n iterations)
  /// Multiplies the L estimate used for the OS probabilities and stepsizes;
  /// 1 leaves the method exact, other values probe misestimation.
  double perturb_lipschitz = 1.0;
  std::string out = "left.csv";
};

struct LeftExperimentResult {
  ProblemSpec instance;
  std::vector<Trace> us_traces;
  std::vector<Trace> os_traces;
  double lambda_us = 0.0;
  double lambda_os = 0.0;
};

LeftExperimentResult experiment_left(const LeftExperimentConfig& cfg);

/// Nonuniform-serial vs fully-parallel comparison per omega on generated
/// m x n instances. NS records once per epoch (n iterations), FP every
/// iteration. m is raised to ceil(n/omega) when the requested m cannot cover
/// all columns.
struct RightExperimentConfig {
  std::vector<int> omegas = {2, 5, 10};
  int runs = 100;
  long long epochs = 30;
  std::uint64_t seed = 1;
  int m = 8;
  int n = 10;
  double gamma = 1.0;
  std::string v_profile = "spiked:0.05";
  std::string out = "right.csv";
};

struct RightOmegaResult {
  int omega = 0;
  ProblemSpec instance;
  std::vector<Trace> ns_traces;
  std::vector<Trace> fp_traces;
  double lambda_os = 0.0;
  double lambda_fp = 0.0;
};

std::vector<RightOmegaResult> experiment_right(const RightExperimentConfig& cfg);

/// "x.csv" -> "x.summary.csv"; other extensions get ".summary.csv" appended.
std::string summary_path(const std::string& out);

/// ESO certificate plus a chi-square fit of empirical draws against the
/// enumerated distribution, as run by the `validate` subcommand.
struct ValidateReport {
  EsoTrialReport eso;
  ChiSquareResult sampling;
  long long draws = 0;
  bool sampling_ok = false;
  bool ok = false;
};

ValidateReport validate_scheme(const ProblemSpec& prob, const SamplingScheme& scheme,
                               int trials, long long draws, std::uint64_t seed);

}  // namespace nsync
