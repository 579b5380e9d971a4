// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/simulation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "fairpairs/config.hpp"
#include "fairpairs/errors.hpp"
#include "fairpairs/log_io.hpp"
#include "fairpairs/pair_stats.hpp"

using namespace fairpairs;

TEST_CASE("identical configurations reproduce identical runs") {
  auto config = default_config();
  config.seed = 1312;
  config.num_queries = 500;
  config.extractors = {Extractor::fairpairs, Extractor::skip_above,
                       Extractor::naive};
  const auto a = run_simulation(config);
  const auto b = run_simulation(config);
  CHECK(a.log == b.log);
  CHECK(a.fairpairs == b.fairpairs);
  CHECK(a.skip_above == b.skip_above);
  CHECK(a.naive_rank_votes == b.naive_rank_votes);

  // Byte-level determinism of the serialized artifacts.
  std::ostringstream log_a, log_b;
  write_log(a.log, log_a);
  write_log(b.log, log_b);
  CHECK(log_a.str() == log_b.str());
  std::ostringstream stats_a, stats_b;
  write_stats_csv(a.fairpairs, stats_a);
  write_stats_csv(b.fairpairs, stats_b);
  CHECK(stats_a.str() == stats_b.str());
}

TEST_CASE("different seeds diverge") {
  auto config = default_config();
  config.num_queries = 50;
  config.seed = 1;
  const auto a = run_simulation(config);
  config.seed = 2;
  const auto b = run_simulation(config);
  CHECK(a.log != b.log);
}

TEST_CASE("a zero-query run produces empty artifacts") {
  auto config = default_config();
  config.num_queries = 0;
  const auto result = run_simulation(config);
  CHECK(result.log.empty());
  CHECK(result.fairpairs.empty());
  CHECK(result.skip_above.empty());
}

TEST_CASE("each record is reproducible from its seed info alone") {
  auto config = default_config();
  config.seed = 5005;
  config.num_queries = 100;
  const auto result = run_simulation(config);
  const auto query = make_query(config);
  for (std::uint64_t i = 0; i < 100; i += 13) {
    const auto standalone =
        simulate_impression(query, config.model, config.seed, i);
    CHECK(standalone == result.log[i]);
    CHECK(standalone.seed_info.experiment_seed == config.seed);
    CHECK(standalone.seed_info.query_index == i);
    CHECK(standalone.query_id == "q" + std::to_string(i + 1));
  }
}

TEST_CASE("every simulated record satisfies the replay invariant") {
  auto config = default_config();
  config.seed = 31;
  config.num_queries = 300;
  const auto result = run_simulation(config);
  for (const auto& rec : result.log) {
    const auto replay = apply_flip_plan(rec.original_order, rec.plan);
    CHECK(replay.order == rec.presented_order);
    // Clicked ranks are strictly increasing and within the list.
    for (std::size_t i = 0; i < rec.clicked_ranks.size(); ++i) {
      CHECK(rec.clicked_ranks[i] >= 1);
      CHECK(rec.clicked_ranks[i] <= rec.presented_order.size());
      if (i > 0) CHECK(rec.clicked_ranks[i] > rec.clicked_ranks[i - 1]);
    }
  }
}

TEST_CASE("online accumulation equals replaying the log") {
  auto config = default_config();
  config.seed = 808;
  config.num_queries = 400;
  config.extractors = {Extractor::fairpairs, Extractor::skip_above};
  const auto result = run_simulation(config);

  PairStats replayed;
  for (const auto& rec : result.log) record_votes(replayed, rec);
  CHECK(replayed == result.fairpairs);

  PairStats skip_replayed;
  for (const auto& rec : result.log) {
    for (const auto& vote :
         skip_above_extractor(rec.presented_order, rec.clicked_ranks,
                              rec.query_id)) {
      skip_replayed.add_preference(vote.winner, vote.loser);
    }
  }
  CHECK(skip_replayed == result.skip_above);
}

TEST_CASE("naive votes accumulate by presented rank") {
  auto config = default_config();
  config.seed = 99;
  config.num_queries = 300;
  config.extractors = {Extractor::naive};
  const auto result = run_simulation(config);
  REQUIRE(result.naive_rank_votes.size() ==
          static_cast<std::size_t>(config.num_docs));
  std::vector<std::uint64_t> replayed(config.num_docs, 0);
  for (const auto& rec : result.log) {
    for (int rank : rec.clicked_ranks) replayed[rank - 1] += 1;
  }
  CHECK(result.naive_rank_votes == replayed);
  std::uint64_t total = 0;
  for (auto v : replayed) total += v;
  CHECK(total > 0);
}

TEST_CASE("adjacent_pair_probabilities matches hand-computed values") {
  auto config = default_config();
  config.num_docs = 2;
  config.relevances = {0.92, 0.80};
  const auto query = make_query(config);
  const auto probs = adjacent_pair_probabilities(query, config.model);
  REQUIRE(probs.size() == 2);
  // Pair bottom sits at presented rank 2 in both orientations:
  // P(click d2 under d1) = E(2) A(0.80) G(0.92) = 0.5 * 0.80 * 1.042.
  // P(click d1 under d2) = E(2) A(0.92) G(0.80) = 0.5 * 0.92 * 1.030.
  CHECK(probs.at({DocumentId{"d2"}, DocumentId{"d1"}}) ==
        doctest::Approx(0.5 * 0.80 * 1.042).epsilon(1e-12));
  CHECK(probs.at({DocumentId{"d1"}, DocumentId{"d2"}}) ==
        doctest::Approx(0.5 * 0.92 * 1.030).epsilon(1e-12));
}

TEST_CASE("adjacent_pair_probabilities covers both orientations per pair") {
  const auto config = default_config();
  const auto query = make_query(config);
  const auto probs = adjacent_pair_probabilities(query, config.model);
  CHECK(probs.size() == 2 * (config.num_docs - 1));
  for (const auto& [key, p] : probs) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(probs.contains({key.second, key.first}));
  }
}

TEST_CASE("adjacent_pair_probabilities rejects cascading models") {
  auto config = default_config();
  config.model = cascade_model();
  const auto query = make_query(config);
  CHECK_THROWS_AS(adjacent_pair_probabilities(query, config.model), Error);
}

TEST_CASE("simulated pair estimates converge to the analytic rates") {
  auto config = default_config();
  config.seed = 271828;
  config.num_queries = 200000;
  const auto result = run_simulation(config);
  const auto query = make_query(config);
  const auto truth = adjacent_pair_probabilities(query, config.model);
  for (const auto& [key, p_true] : truth) {
    const auto n = result.fairpairs.impressions(key.first, key.second);
    REQUIRE(n > 0);
    const double p_hat = estimate_p(result.fairpairs, key.first, key.second);
    const double sd = std::sqrt(p_true * (1.0 - p_true) / n);
    CHECK(std::abs(p_hat - p_true) < 4.0 * sd);
  }
}

TEST_CASE("probe runs place the probe inside the target window") {
  auto config = default_config();
  config.seed = 6060;
  config.num_queries = 2000;
  config.probe = ProbeConfig{};
  config.probe->target_rank_lo = 2;
  config.probe->target_rank_hi = 5;

  SUBCASE("randomize-then-move keeps the probe exactly on target") {
    config.probe->swap_before_fairpairs = false;
    const auto result = run_probe_experiment(config);
    CHECK(result.log.size() == config.num_queries);
    for (const auto& rec : result.log) {
      const auto it = std::find(rec.presented_order.order.begin(),
                                rec.presented_order.order.end(),
                                result.probe_doc);
      REQUIRE(it != rec.presented_order.order.end());
      const int rank =
          static_cast<int>(it - rec.presented_order.order.begin()) + 1;
      CHECK(rank >= config.probe->target_rank_lo);
      CHECK(rank <= config.probe->target_rank_hi);
      // The logged original order must still explain the presented order.
      CHECK(apply_flip_plan(rec.original_order, rec.plan).order ==
            rec.presented_order);
    }
  }

  SUBCASE("move-then-randomize lets the pair swap shift it by one") {
    config.probe->swap_before_fairpairs = true;
    const auto result = run_probe_experiment(config);
    for (const auto& rec : result.log) {
      const auto it = std::find(rec.presented_order.order.begin(),
                                rec.presented_order.order.end(),
                                result.probe_doc);
      REQUIRE(it != rec.presented_order.order.end());
      const int rank =
          static_cast<int>(it - rec.presented_order.order.begin()) + 1;
      CHECK(rank >= config.probe->target_rank_lo - 1);
      CHECK(rank <= config.probe->target_rank_hi + 1);
      CHECK(apply_flip_plan(rec.original_order, rec.plan).order ==
            rec.presented_order);
    }
  }
}

TEST_CASE("probe targets are drawn uniformly") {
  auto config = default_config();
  config.seed = 121;
  config.num_queries = 20000;
  config.probe = ProbeConfig{};
  config.probe->target_rank_lo = 1;
  config.probe->target_rank_hi = 7;  // num_docs + 1 targets
  config.probe->swap_before_fairpairs = false;
  const auto result = run_probe_experiment(config);
  std::map<int, int> counts;
  for (const auto& rec : result.log) {
    const auto it = std::find(rec.presented_order.order.begin(),
                              rec.presented_order.order.end(),
                              result.probe_doc);
    counts[static_cast<int>(it - rec.presented_order.order.begin()) + 1] += 1;
  }
  const int span = 7;
  const double expected = static_cast<double>(config.num_queries) / span;
  const double sd = std::sqrt(expected * (1.0 - 1.0 / span));
  for (int target = 1; target <= span; ++target) {
    CHECK(std::abs(counts[target] - expected) < 4.0 * sd);
  }
}

TEST_CASE("probe tables label the probe with a hash mark") {
  auto config = default_config();
  config.seed = 33;
  config.num_queries = 3000;
  config.probe = ProbeConfig{};
  config.probe->target_rank_hi = config.num_docs;
  const auto result = run_probe_experiment(config);
  CHECK(result.probe_doc == DocumentId{"probe"});
  bool saw_probe_label = false;
  for (const auto& row : result.table.rows) {
    if (row.label.find('#') != std::string::npos) saw_probe_label = true;
  }
  CHECK(saw_probe_label);
  CHECK(result.table.find("probe_bottom") != nullptr);
}

TEST_CASE("probe configuration errors are rejected") {
  auto config = default_config();
  SUBCASE("missing probe block") {
    CHECK_THROWS_AS(run_probe_experiment(config), Error);
  }
  SUBCASE("probe at least as relevant as a regular document") {
    config.probe = ProbeConfig{};
    config.probe->probe_relevance = 0.5;  // ties/overlaps the ladder
    CHECK_THROWS_AS(run_probe_experiment(config), ProbeRelevanceError);
  }
}
