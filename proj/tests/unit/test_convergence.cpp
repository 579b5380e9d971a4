// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/convergence.hpp"

#include <doctest.h>

#include <cmath>

#include "fairpairs/config.hpp"
#include "fairpairs/errors.hpp"
#include "fairpairs/learner.hpp"
#include "fairpairs/pair_stats.hpp"
#include "fairpairs/simulation.hpp"
#include "fairpairs/statistics.hpp"

using namespace fairpairs;

namespace {

const DocumentId kA{"a"};
const DocumentId kB{"b"};

PairProbabilities two_doc_probs(double p_ab, double p_ba) {
  return {{{kA, kB}, p_ab}, {{kB, kA}, p_ba}};
}

}  // namespace

TEST_CASE("epsilon_from_model halves the smallest orientation gap") {
  const auto params = epsilon_from_model(two_doc_probs(0.3, 0.2));
  CHECK(params.epsilon == doctest::Approx(0.05).epsilon(1e-12));

  PairProbabilities three;
  const DocumentId c{"c"};
  three[{kA, kB}] = 0.40;
  three[{kB, kA}] = 0.10;  // gap 0.30
  three[{kB, c}] = 0.22;
  three[{c, kB}] = 0.18;   // gap 0.04: the minimum
  CHECK(epsilon_from_model(three).epsilon ==
        doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("epsilon_from_model rejects missing orientations and zero gaps") {
  CHECK_THROWS_AS(epsilon_from_model({{{kA, kB}, 0.3}}), NoDataError);
  CHECK_THROWS_AS(epsilon_from_model({}), NoDataError);
  CHECK_THROWS_AS(epsilon_from_model(two_doc_probs(0.25, 0.25)),
                  ZeroGapError);
}

TEST_CASE("epsilon for the default six-document ladder is pinned") {
  // Under the default model the orientation gap of an adjacent pair at
  // presented depth b is 0.95 * (r_i - r_j) / b; the smallest gap over the
  // ladder is attained by the last pair: 0.95 * 0.23 / 6.
  auto config = default_config();
  config.relevances = {0.92, 0.80, 0.65, 0.48, 0.28, 0.05};
  config.num_docs = 6;
  const auto query = make_query(config);
  const auto true_p = adjacent_pair_probabilities(query, config.model);
  const auto params = epsilon_from_model(true_p);
  CHECK(params.epsilon ==
        doctest::Approx(0.5 * 0.95 * 0.23 / 6.0).epsilon(1e-12));
  CHECK(params.epsilon == doctest::Approx(0.0182083333333).epsilon(1e-9));
}

TEST_CASE("sufficiency_check applies the balance and accuracy gates") {
  const ConvergenceParams params{0.05};
  const auto true_p = two_doc_probs(0.30, 0.20);

  SUBCASE("balanced and accurate data passes") {
    PairStats stats;
    // 1000 vs 980 impressions: balance deviation 0.02 < 0.05. Click counts
    // chosen so the estimates sit exactly on the true rates.
    for (int i = 0; i < 1000; ++i) stats.add_impression(kA, kB, i < 300);
    for (int i = 0; i < 980; ++i) stats.add_impression(kB, kA, i < 196);
    const auto report = sufficiency_check(stats, params, &true_p);
    CHECK(report.overall);
    CHECK_FALSE(report.accuracy_is_proxy);
    REQUIRE(report.pairs.size() == 2);
    for (const auto& pair : report.pairs) {
      CHECK(pair.ok());
      CHECK(pair.balance_deviation < params.epsilon);
      CHECK(pair.accuracy_deviation < params.epsilon / 2.0);
    }
  }

  SUBCASE("lopsided impression counts fail the balance gate") {
    PairStats stats;
    for (int i = 0; i < 1000; ++i) stats.add_impression(kA, kB, i < 300);
    for (int i = 0; i < 700; ++i) stats.add_impression(kB, kA, i < 140);
    const auto report = sufficiency_check(stats, params, &true_p);
    CHECK_FALSE(report.overall);
    bool saw_balance_failure = false;
    for (const auto& pair : report.pairs) {
      if (!pair.balance_ok) saw_balance_failure = true;
    }
    CHECK(saw_balance_failure);
  }

  SUBCASE("estimates far from the true rate fail the accuracy gate") {
    PairStats stats;
    // Balanced, but the first orientation's estimate is off by 0.10 > eps/2.
    for (int i = 0; i < 1000; ++i) stats.add_impression(kA, kB, i < 400);
    for (int i = 0; i < 1000; ++i) stats.add_impression(kB, kA, i < 200);
    const auto report = sufficiency_check(stats, params, &true_p);
    CHECK_FALSE(report.overall);
  }

  SUBCASE("an orientation with no impressions is a hard error") {
    PairStats stats;
    for (int i = 0; i < 100; ++i) stats.add_impression(kA, kB, 0);
    CHECK_THROWS_AS(sufficiency_check(stats, params, &true_p), NoDataError);
  }

  SUBCASE("epsilon must be positive") {
    PairStats stats;
    stats.add_impression(kA, kB, 0);
    stats.add_impression(kB, kA, 0);
    CHECK_THROWS_AS(sufficiency_check(stats, ConvergenceParams{0.0}, &true_p),
                    Error);
  }
}

TEST_CASE("without true probabilities the CI half-width stands in") {
  PairStats stats;
  for (int i = 0; i < 4000; ++i) stats.add_impression(kA, kB, i < 1200);
  for (int i = 0; i < 3990; ++i) stats.add_impression(kB, kA, i < 798);
  const auto report = sufficiency_check(stats, ConvergenceParams{0.05});
  CHECK(report.accuracy_is_proxy);
  REQUIRE(report.pairs.size() == 2);
  for (const auto& pair : report.pairs) {
    // The proxy equals the Wilson half-width of this orientation's estimate.
    const auto ci = wilson_interval(
        pair.n_ij == 4000 ? 1200 : 798, pair.n_ij, 0.95);
    CHECK(pair.accuracy_deviation ==
          doctest::Approx(0.5 * (ci.hi - ci.lo)).epsilon(1e-12));
  }
  CHECK(report.overall);  // ~0.015 half-width < 0.025 at n = 4000
}

TEST_CASE("simulated data reaches sufficiency and the learner recovers") {
  // Three documents with wide gaps converge quickly; once the report says
  // sufficient, the error-rate minimizer must return the relevance order.
  auto config = default_config();
  config.seed = 314;
  config.num_docs = 3;
  config.relevances = {0.9, 0.5, 0.1};
  const auto query = make_query(config);
  const auto true_p = adjacent_pair_probabilities(query, config.model);
  const auto params = epsilon_from_model(true_p);

  PairStats stats;
  bool sufficient = false;
  const int chunk = 2000;
  for (int round = 0; round < 20 && !sufficient; ++round) {
    config.num_queries = chunk;
    config.seed = 314 + round;
    const auto result = run_simulation(config);
    stats.merge(result.fairpairs);
    try {
      sufficient = sufficiency_check(stats, params, &true_p).overall;
    } catch (const NoDataError&) {
      // Some orientation not seen yet; keep simulating.
    }
  }
  REQUIRE(sufficient);
  const auto learned = minimize_error_exhaustive(stats, stats.documents());
  CHECK(learned.order == true_ranking(query).order);
}
