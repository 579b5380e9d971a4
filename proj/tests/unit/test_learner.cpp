// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/learner.hpp"

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "fairpairs/errors.hpp"
#include "fairpairs/pair_stats.hpp"
#include "fairpairs/rng.hpp"

using namespace fairpairs;

namespace {

const DocumentId kA{"a"};
const DocumentId kB{"b"};
const DocumentId kC{"c"};

std::vector<DocumentId> ids(std::initializer_list<const char*> names) {
  std::vector<DocumentId> out;
  for (const char* name : names) out.push_back(DocumentId{name});
  return out;
}

RankedList ranked(std::initializer_list<const char*> names) {
  return RankedList{ids(names)};
}

// Random vote set over `n` documents whose pairwise majorities all agree
// with the order d1 > d2 > ... > dn. With `uniform_margin` set, every pair's
// majority leads its minority by exactly 10 votes, which makes the net-vote
// order provably equal to the majority order.
PairStats consistent_votes(int n, RngStream& rng, bool uniform_margin = false) {
  PairStats stats;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const DocumentId winner{"d" + std::to_string(i)};
      const DocumentId loser{"d" + std::to_string(j)};
      const std::uint64_t minority = rng.uniform_int(5);
      const std::uint64_t majority =
          uniform_margin ? minority + 10 : minority + 5 + rng.uniform_int(20);
      stats.add_counts(winner, loser, PairCounts{0, majority});
      stats.add_counts(loser, winner, PairCounts{0, minority});
    }
  }
  return stats;
}

}  // namespace

TEST_CASE("error_rate counts exactly the contradicted votes") {
  PairStats stats;
  stats.add_counts(kA, kB, PairCounts{10, 6});  // six votes a beats b
  stats.add_counts(kB, kA, PairCounts{10, 2});  // two votes b beats a
  CHECK(error_rate(ranked({"a", "b"}), stats) == 2);
  CHECK(error_rate(ranked({"b", "a"}), stats) == 6);
}

TEST_CASE("error_rate of opposite rankings sums to the total vote count") {
  RngStream rng{5551};
  for (int trial = 0; trial < 50; ++trial) {
    const auto stats = consistent_votes(4, rng);
    std::uint64_t total = 0;
    for (const auto& [key, counts] : stats.entries()) total += counts.clicks;
    auto forward = ranked({"d1", "d2", "d3", "d4"});
    auto backward = forward;
    std::reverse(backward.order.begin(), backward.order.end());
    CHECK(error_rate(forward, stats) + error_rate(backward, stats) == total);
  }
}

TEST_CASE("error_rate validates its ranking") {
  PairStats stats;
  stats.add_counts(kA, kB, PairCounts{1, 1});
  CHECK(error_rate(ranked({"b", "a", "c"}), stats) == 1);
  CHECK_THROWS_AS(error_rate(ranked({"a"}), stats), MissingDocumentError);
  CHECK_THROWS_AS(error_rate(ranked({"a", "a", "b"}), stats), Error);
  CHECK(error_rate(ranked({"a", "b"}), PairStats{}) == 0);
}

TEST_CASE("exhaustive minimizer recovers a planted order") {
  PairStats stats;
  // Votes consistent with c > a > b.
  stats.add_counts(kC, kA, PairCounts{0, 9});
  stats.add_counts(kA, kC, PairCounts{0, 1});
  stats.add_counts(kA, kB, PairCounts{0, 7});
  stats.add_counts(kB, kA, PairCounts{0, 2});
  stats.add_counts(kC, kB, PairCounts{0, 8});
  const auto best = minimize_error_exhaustive(stats, ids({"a", "b", "c"}));
  CHECK(best.order == ids({"c", "a", "b"}));
  CHECK(error_rate(best, stats) == 3);
}

TEST_CASE("exhaustive minimizer attains the minimum over random rankings") {
  RngStream rng{808};
  for (int trial = 0; trial < 20; ++trial) {
    const auto stats = consistent_votes(5, rng);
    auto docs = ids({"d1", "d2", "d3", "d4", "d5"});
    const auto best = minimize_error_exhaustive(stats, docs);
    const auto best_err = error_rate(best, stats);
    // Independent route: enumerate every permutation with std::next_permutation
    // and score it through the public error_rate.
    std::sort(docs.begin(), docs.end());
    std::uint64_t brute = UINT64_MAX;
    do {
      brute = std::min(brute, error_rate(RankedList{docs}, stats));
    } while (std::next_permutation(docs.begin(), docs.end()));
    CHECK(best_err == brute);
  }
}

TEST_CASE("exhaustive minimizer breaks ties lexicographically") {
  // No votes at all: every permutation has error 0, so the smallest wins.
  const auto best =
      minimize_error_exhaustive(PairStats{}, ids({"zeta", "alpha", "mid"}));
  CHECK(best.order == ids({"alpha", "mid", "zeta"}));
}

TEST_CASE("exhaustive minimizer rejects oversized and duplicated inputs") {
  std::vector<DocumentId> eleven;
  for (int i = 0; i < 11; ++i) eleven.push_back(DocumentId{std::to_string(i)});
  CHECK_THROWS_AS(minimize_error_exhaustive(PairStats{}, eleven),
                  TooManyDocumentsError);
  CHECK_THROWS_AS(minimize_error_exhaustive(PairStats{}, ids({"a", "a"})),
                  Error);
}

TEST_CASE("greedy equals exhaustive when margins are uniform") {
  RngStream rng{12321};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(5));
    const auto stats = consistent_votes(n, rng, /*uniform_margin=*/true);
    std::vector<DocumentId> docs;
    for (int i = 1; i <= n; ++i) docs.push_back(DocumentId{"d" + std::to_string(i)});
    CHECK(minimize_error_greedy(stats, docs).order ==
          minimize_error_exhaustive(stats, docs).order);
  }
}

TEST_CASE("lopsided margins can pull greedy away from the minimum") {
  // Transitive majorities, but two hairline margins against one landslide:
  // net votes rank d2 first while the true minimum keeps the majority order.
  PairStats stats;
  stats.add_counts(DocumentId{"d1"}, DocumentId{"d2"}, PairCounts{0, 5});
  stats.add_counts(DocumentId{"d2"}, DocumentId{"d1"}, PairCounts{0, 4});
  stats.add_counts(DocumentId{"d1"}, DocumentId{"d3"}, PairCounts{0, 5});
  stats.add_counts(DocumentId{"d3"}, DocumentId{"d1"}, PairCounts{0, 4});
  stats.add_counts(DocumentId{"d2"}, DocumentId{"d3"}, PairCounts{0, 24});
  const auto docs = ids({"d1", "d2", "d3"});
  const auto exhaustive = minimize_error_exhaustive(stats, docs);
  CHECK(exhaustive.order == ids({"d1", "d2", "d3"}));
  CHECK(error_rate(exhaustive, stats) == 8);
  const auto greedy = minimize_error_greedy(stats, docs);
  CHECK(greedy.order == ids({"d2", "d1", "d3"}));
  CHECK(error_rate(greedy, stats) == 9);
}

TEST_CASE("greedy stays a permutation on cyclic majorities") {
  PairStats stats;
  stats.add_counts(kA, kB, PairCounts{0, 5});
  stats.add_counts(kB, kC, PairCounts{0, 5});
  stats.add_counts(kC, kA, PairCounts{0, 5});
  const auto docs = ids({"a", "b", "c"});
  auto greedy = minimize_error_greedy(stats, docs).order;
  std::sort(greedy.begin(), greedy.end());
  CHECK(greedy == docs);
  // Any linear order contradicts exactly one edge of the 3-cycle.
  CHECK(error_rate(minimize_error_exhaustive(stats, docs), stats) == 5);
}

TEST_CASE("greedy scales past the exhaustive limit") {
  RngStream rng{64};
  const int n = 14;
  const auto stats = consistent_votes(n, rng);
  std::vector<DocumentId> docs;
  for (int i = 1; i <= n; ++i) docs.push_back(DocumentId{"d" + std::to_string(i)});
  const auto order = minimize_error_greedy(stats, docs).order;
  CHECK(order.size() == docs.size());
  CHECK_THROWS_AS(minimize_error_exhaustive(stats, docs),
                  TooManyDocumentsError);
}

TEST_CASE("skip_above_extractor votes clicked over unclicked-above") {
  const auto presented = ranked({"d1", "d2", "d3", "d4", "d5"});

  SUBCASE("one click deep in the list") {
    const auto votes = skip_above_extractor(presented, {3}, "q1");
    REQUIRE(votes.size() == 2);
    CHECK(votes[0] == PreferenceVote{DocumentId{"d3"}, DocumentId{"d1"}, "q1"});
    CHECK(votes[1] == PreferenceVote{DocumentId{"d3"}, DocumentId{"d2"}, "q1"});
  }
  SUBCASE("a click at rank one has nothing to skip") {
    CHECK(skip_above_extractor(presented, {1}).empty());
  }
  SUBCASE("multiple clicks skip only unclicked documents") {
    const auto votes = skip_above_extractor(presented, {2, 4});
    REQUIRE(votes.size() == 3);
    CHECK(votes[0].winner == DocumentId{"d2"});
    CHECK(votes[0].loser == DocumentId{"d1"});
    CHECK(votes[1].winner == DocumentId{"d4"});
    CHECK(votes[1].loser == DocumentId{"d1"});
    CHECK(votes[2].winner == DocumentId{"d4"});
    CHECK(votes[2].loser == DocumentId{"d3"});
  }
  SUBCASE("duplicate clicked ranks collapse") {
    CHECK(skip_above_extractor(presented, {3, 3}).size() == 2);
  }
  SUBCASE("ranks outside the list throw") {
    CHECK_THROWS_AS(skip_above_extractor(presented, {0}),
                    RankOutOfRangeError);
    CHECK_THROWS_AS(skip_above_extractor(presented, {6}),
                    RankOutOfRangeError);
  }
}

TEST_CASE("naive_extractor endorses each clicked document once") {
  const auto presented = ranked({"d1", "d2", "d3"});
  const auto votes = naive_extractor(presented, {1, 3}, "q7");
  REQUIRE(votes.size() == 2);
  CHECK(votes[0] == AbsoluteVote{DocumentId{"d1"}, "q7"});
  CHECK(votes[1] == AbsoluteVote{DocumentId{"d3"}, "q7"});
  CHECK(naive_extractor(presented, {}).empty());
  CHECK(naive_extractor(presented, {2, 2}).size() == 1);
  CHECK_THROWS_AS(naive_extractor(presented, {4}), RankOutOfRangeError);
}
