// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/pair_stats.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fairpairs/click_log.hpp"
#include "fairpairs/config.hpp"
#include "fairpairs/errors.hpp"
#include "fairpairs/rng.hpp"
#include "fairpairs/simulation.hpp"

using namespace fairpairs;

namespace {

const DocumentId kA{"a"};
const DocumentId kB{"b"};
const DocumentId kC{"c"};

ClickLogRecord worked_record(std::vector<int> clicks) {
  ClickLogRecord rec;
  rec.query_id = "q1";
  rec.plan = FlipPlan{0, {false, true}};
  for (int i = 1; i <= 5; ++i) {
    rec.original_order.order.push_back(DocumentId{"d" + std::to_string(i)});
  }
  rec.presented_order.order = {DocumentId{"d1"}, DocumentId{"d2"},
                               DocumentId{"d4"}, DocumentId{"d3"},
                               DocumentId{"d5"}};
  rec.clicked_ranks = std::move(clicks);
  rec.seed_info = SeedInfo{1, 0};
  return rec;
}

}  // namespace

TEST_CASE("counters accumulate and missing pairs read as zero") {
  PairStats stats;
  CHECK(stats.empty());
  CHECK(stats.impressions(kA, kB) == 0);
  CHECK(stats.clicks(kA, kB) == 0);
  stats.add_impression(kA, kB, 1);
  stats.add_impression(kA, kB, 0);
  stats.add_impression(kB, kA, 1);
  CHECK(stats.impressions(kA, kB) == 2);
  CHECK(stats.clicks(kA, kB) == 1);
  CHECK(stats.impressions(kB, kA) == 1);
  CHECK(stats.clicks(kB, kA) == 1);
  CHECK_FALSE(stats.empty());
  CHECK(stats.documents() == std::vector<DocumentId>{kA, kB});
}

TEST_CASE("add_preference counts clicks without impressions") {
  PairStats stats;
  stats.add_preference(kA, kB);
  stats.add_preference(kA, kB);
  CHECK(stats.clicks(kA, kB) == 2);
  CHECK(stats.impressions(kA, kB) == 0);
}

TEST_CASE("record_votes books every presented pair once") {
  // Presented order d1 d2 d4 d3 d5 under k = 0: pairs are (d1, d2) and
  // (d4, d3) as shown, so the bottom-above-top keys are (d2 below d1) and
  // (d3 below d4).
  PairStats stats;
  record_votes(stats, worked_record({4}));
  CHECK(stats.impressions(DocumentId{"d2"}, DocumentId{"d1"}) == 1);
  CHECK(stats.clicks(DocumentId{"d2"}, DocumentId{"d1"}) == 0);
  CHECK(stats.impressions(DocumentId{"d3"}, DocumentId{"d4"}) == 1);
  CHECK(stats.clicks(DocumentId{"d3"}, DocumentId{"d4"}) == 1);
  // No other orientations appear.
  CHECK(stats.impressions(DocumentId{"d1"}, DocumentId{"d2"}) == 0);
  CHECK(stats.impressions(DocumentId{"d4"}, DocumentId{"d3"}) == 0);
  CHECK(stats.entries().size() == 2);
}

TEST_CASE("record_votes with no clicks still counts the impressions") {
  PairStats stats;
  record_votes(stats, worked_record({}));
  CHECK(stats.impressions(DocumentId{"d2"}, DocumentId{"d1"}) == 1);
  CHECK(stats.clicks(DocumentId{"d2"}, DocumentId{"d1"}) == 0);
  CHECK(stats.clicks(DocumentId{"d3"}, DocumentId{"d4"}) == 0);
}

TEST_CASE("record_votes ignores clicks outside pair bottoms") {
  PairStats stats;
  record_votes(stats, worked_record({1, 3, 5}));
  for (const auto& [key, counts] : stats.entries()) {
    CHECK(counts.clicks == 0);
    CHECK(counts.impressions == 1);
  }
}

TEST_CASE("record_votes validates the record") {
  auto tampered = worked_record({2});
  tampered.presented_order.order[0] = DocumentId{"d2"};
  tampered.presented_order.order[1] = DocumentId{"d1"};
  PairStats stats;
  CHECK_THROWS_AS(record_votes(stats, tampered), InconsistentRecordError);

  auto out_of_range = worked_record({6});
  CHECK_THROWS_AS(record_votes(stats, out_of_range), RankOutOfRangeError);
}

TEST_CASE("estimate_p divides clicks by impressions") {
  PairStats stats;
  for (int i = 0; i < 36; ++i) {
    stats.add_impression(kA, kB, i < 20 ? 1 : 0);
  }
  CHECK(estimate_p(stats, kA, kB) ==
        doctest::Approx(20.0 / 36.0).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_p(stats, kB, kA), NoDataError);
}

TEST_CASE("merge is an entrywise sum with the empty stats as identity") {
  PairStats a;
  a.add_impression(kA, kB, 1);
  a.add_impression(kB, kC, 0);
  PairStats b;
  b.add_impression(kA, kB, 0);
  b.add_impression(kC, kA, 1);

  PairStats ab = a;
  ab.merge(b);
  PairStats ba = b;
  ba.merge(a);
  CHECK(ab == ba);
  CHECK(ab.impressions(kA, kB) == 2);
  CHECK(ab.clicks(kA, kB) == 1);
  CHECK(ab.impressions(kB, kC) == 1);
  CHECK(ab.impressions(kC, kA) == 1);

  PairStats with_empty = a;
  with_empty.merge(PairStats{});
  CHECK(with_empty == a);
}

TEST_CASE("sharded replay merges to the sequential totals") {
  auto config = default_config();
  config.seed = 404;
  config.num_queries = 400;
  const auto result = run_simulation(config);

  PairStats sequential;
  for (const auto& rec : result.log) record_votes(sequential, rec);

  // Split the log at arbitrary points, replay each shard separately, merge.
  const std::vector<std::size_t> cuts{0, 17, 120, 121, 399, 400};
  PairStats merged;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    PairStats shard;
    for (std::size_t i = cuts[s]; i < cuts[s + 1]; ++i) {
      record_votes(shard, result.log[i]);
    }
    merged.merge(shard);
  }
  CHECK(merged == sequential);
  CHECK(merged == result.fairpairs);
}

TEST_CASE("clicks never exceed impressions on simulated data") {
  auto config = default_config();
  config.seed = 2024;
  config.num_queries = 500;
  const auto result = run_simulation(config);
  for (const auto& [key, counts] : result.fairpairs.entries()) {
    CHECK(counts.clicks <= counts.impressions);
  }
}

TEST_CASE("stats CSV writes a frozen golden layout") {
  PairStats stats;
  for (int i = 0; i < 36; ++i) {
    stats.add_impression(kA, kB, i < 20 ? 1 : 0);
  }
  stats.add_impression(kB, kA, 1);
  std::ostringstream out;
  write_stats_csv(stats, out);
  CHECK(out.str() ==
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,36,20,0.555556,0.395811,0.704587\n"
        "b,a,1,1,1.000000,0.206549,1.000000\n");
}

TEST_CASE("stats CSV round-trips the counts") {
  auto config = default_config();
  config.seed = 5;
  config.num_queries = 300;
  const auto result = run_simulation(config);
  std::ostringstream out;
  write_stats_csv(result.fairpairs, out);
  std::istringstream in{out.str()};
  const auto back = read_stats_csv(in);
  CHECK(back == result.fairpairs);
}

TEST_CASE("stats CSV escapes ids that contain delimiters") {
  PairStats stats;
  stats.add_impression(DocumentId{"utterly, strange"}, DocumentId{"with \"q\""},
                       1);
  std::ostringstream out;
  write_stats_csv(stats, out);
  std::istringstream in{out.str()};
  const auto back = read_stats_csv(in);
  CHECK(back == stats);
  CHECK(back.impressions(DocumentId{"utterly, strange"},
                         DocumentId{"with \"q\""}) == 1);
}

TEST_CASE("vote-only rows round-trip with empty derived columns") {
  PairStats stats;
  stats.add_preference(kA, kB);
  std::ostringstream out;
  write_stats_csv(stats, out);
  CHECK(out.str() ==
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,0,1,,,\n");
  std::istringstream in{out.str()};
  CHECK(read_stats_csv(in) == stats);
}

TEST_CASE("empty stats serialize to a bare header") {
  std::ostringstream out;
  write_stats_csv(PairStats{}, out);
  CHECK(out.str() == "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n");
  std::istringstream in{out.str()};
  CHECK(read_stats_csv(in).empty());
}

TEST_CASE("stats CSV reader reports malformed input with line numbers") {
  SUBCASE("wrong header") {
    std::istringstream in{"nope\n"};
    CHECK_THROWS_WITH_AS(read_stats_csv(in), doctest::Contains("line 1"),
                         ParseError);
  }
  SUBCASE("wrong field count") {
    std::istringstream in{
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,3\n"};
    CHECK_THROWS_WITH_AS(read_stats_csv(in), doctest::Contains("line 2"),
                         ParseError);
  }
  SUBCASE("non-numeric count") {
    std::istringstream in{
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,many,1,,,\n"};
    CHECK_THROWS_AS(read_stats_csv(in), ParseError);
  }
  SUBCASE("duplicate pair") {
    std::istringstream in{
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,3,1,,,\n"
        "a,b,4,2,,,\n"};
    CHECK_THROWS_WITH_AS(read_stats_csv(in), doctest::Contains("line 3"),
                         ParseError);
  }
  SUBCASE("clicks exceeding impressions") {
    std::istringstream in{
        "doc_i,doc_j,n_ij,c_ij,p_ij,ci_lo,ci_hi\n"
        "a,b,3,4,,,\n"};
    CHECK_THROWS_AS(read_stats_csv(in), ParseError);
  }
}
