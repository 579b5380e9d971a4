// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpairs/types.hpp"

namespace fairpairs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string details;
};

// Each check below runs a self-contained simulation experiment against the
// default parameters pinned in its params struct and reports pass/fail with
// a human-readable summary. Tolerances and sizes live in the structs so the
// verification surface is reviewable in one place.

// Unbiasedness of the paired estimates: with a strictly decreasing relevance
// ladder, every base-adjacent pair must show a higher bottom-click rate for
// the more relevant document, with non-overlapping confidence intervals, and
// the run must finish within the budget below.
struct Theorem1Params {
  std::uint64_t seed = 94301;
  std::uint64_t num_queries = 200000;
  std::vector<double> relevances{0.92, 0.80, 0.65, 0.48, 0.28, 0.05};
  double confidence = 0.95;
  double max_seconds = 30.0;
};
CheckResult check_theorem1(const Theorem1Params& params = {});

// Learning convergence: simulate per-seed until the data-sufficiency test
// passes against the analytic pair probabilities, then require the
// error-rate minimizer to output the exact relevance order. Also asserts,
// per pair, the vote-surplus inequality the sufficiency bound promises.
struct Theorem2Params {
  std::uint64_t base_seed = 7100;
  int num_seeds = 100;
  int min_successes = 99;
  std::uint64_t chunk_queries = 20000;
  std::uint64_t max_queries = 4000000;
  std::vector<double> relevances{0.92, 0.80, 0.65, 0.48, 0.28, 0.05};
};
CheckResult check_theorem2(const Theorem2Params& params = {});

// Negative control: a click model whose predecessor effect drowns out the
// document's own relevance must (a) fail the identifiability condition
// analytically and (b) visibly flip preference signs in simulation.
struct Assumption2NecessityParams {
  std::uint64_t seed = 52601;
  std::uint64_t num_queries = 200000;
  std::vector<double> relevances{0.92, 0.80, 0.65, 0.48, 0.28, 0.05};
};
CheckResult check_assumption2_necessity(
    const Assumption2NecessityParams& params = {});

// Baseline bias: the naive per-click vote stream must over-reward rank 1 by
// the examination ratio (Monte Carlo within 10% of the closed form, and at
// least ratio_target), and the skip-above stream must mislearn the ranking.
struct BiasBaselineParams {
  std::uint64_t seed = 60177;
  std::uint64_t num_queries = 100000;
  std::vector<double> relevances{0.92, 0.80, 0.65, 0.48, 0.28, 0.05};
  double ratio_target = 5.0;
  double ratio_tolerance = 0.10;
};
CheckResult check_bias_baselines(const BiasBaselineParams& params = {});

// Presentation safety: no document ever moves more than one rank, and the
// empirical presented-rank distribution matches exhaustive enumeration
// within z_limit standard errors per cell.
struct DisplacementParams {
  std::uint64_t seed = 8844;
  std::uint64_t trials = 1000000;
  int num_docs = 5;
  double z_limit = 3.0;
};
CheckResult check_displacement_symmetry(const DisplacementParams& params = {});

// Probe experiment: a known-low-relevance document cycled through every
// rank must, as a pair bottom, be clicked clearly less than regular bottoms
// (disjoint intervals), while as a pair top it barely moves the rate.
struct ProbeCheckParams {
  std::uint64_t seed = 31415;
  std::uint64_t num_queries = 100000;
  std::vector<double> relevances{0.90, 0.82, 0.74, 0.66, 0.58, 0.50, 0.42, 0.34};
  double probe_relevance = 0.05;
  double confidence = 0.95;
};
CheckResult check_probe_experiment(const ProbeCheckParams& params = {});

// All six checks with their default parameters, in a fixed order.
std::vector<CheckResult> run_all_checks();

}  // namespace fairpairs
