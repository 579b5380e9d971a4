// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/learner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace fairpairs {

namespace {

std::map<DocumentId, std::size_t> position_index(
    const std::vector<DocumentId>& order) {
  std::map<DocumentId, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!index.emplace(order[i], i).second) {
      throw Error("ranking lists document '" + order[i].value + "' twice");
    }
  }
  return index;
}

}  // namespace

ErrorCount error_rate(const RankedList& ranking, const PairStats& stats) {
  const auto position = position_index(ranking.order);
  ErrorCount errors = 0;
  for (const auto& [key, counts] : stats.entries()) {
    if (counts.clicks == 0) continue;
    const auto pos_i = position.find(key.first);
    const auto pos_j = position.find(key.second);
    if (pos_i == position.end() || pos_j == position.end()) {
      throw MissingDocumentError(
          "votes mention a document missing from the ranking ('" +
          (pos_i == position.end() ? key.first.value : key.second.value) +
          "')");
    }
    // Votes say "i beats j"; the ranking contradicts them when it places i
    // below (after) j.
    if (pos_i->second > pos_j->second) errors += counts.clicks;
  }
  return errors;
}

RankedList minimize_error_exhaustive(const PairStats& stats,
                                     std::vector<DocumentId> documents) {
  if (documents.size() > 10) {
    throw TooManyDocumentsError(
        "exhaustive search over " + std::to_string(documents.size()) +
        "! permutations refused; use minimize_error_greedy");
  }
  std::sort(documents.begin(), documents.end());
  if (std::adjacent_find(documents.begin(), documents.end()) !=
      documents.end()) {
    throw Error("duplicate documents in candidate list");
  }
  // Index the vote entries once, so scoring a permutation is one pass over
  // the entries instead of a map rebuild.
  std::map<DocumentId, std::size_t> doc_index;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    doc_index.emplace(documents[i], i);
  }
  struct Entry {
    std::size_t i, j;
    std::uint64_t clicks;
  };
  std::vector<Entry> entries;
  for (const auto& [key, counts] : stats.entries()) {
    if (counts.clicks == 0) continue;
    const auto it_i = doc_index.find(key.first);
    const auto it_j = doc_index.find(key.second);
    if (it_i == doc_index.end() || it_j == doc_index.end()) {
      throw MissingDocumentError(
          "votes mention a document missing from the candidate list");
    }
    entries.push_back({it_i->second, it_j->second, counts.clicks});
  }

  std::vector<std::size_t> perm(documents.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::vector<std::size_t> position(documents.size());
  std::vector<std::size_t> best_perm = perm;
  ErrorCount best_errors = 0;
  bool first = true;
  do {
    for (std::size_t rank = 0; rank < perm.size(); ++rank) {
      position[perm[rank]] = rank;
    }
    ErrorCount errors = 0;
    for (const auto& entry : entries) {
      if (position[entry.i] > position[entry.j]) errors += entry.clicks;
    }
    // Strict improvement only: permutations are visited in lexicographic
    // order, so ties resolve to the lexicographically smallest minimizer.
    if (first || errors < best_errors) {
      best_errors = errors;
      best_perm = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  RankedList out;
  out.order.reserve(documents.size());
  for (std::size_t idx : best_perm) out.order.push_back(documents[idx]);
  return out;
}

RankedList minimize_error_greedy(const PairStats& stats,
                                 std::vector<DocumentId> documents) {
  std::sort(documents.begin(), documents.end());
  if (std::adjacent_find(documents.begin(), documents.end()) !=
      documents.end()) {
    throw Error("duplicate documents in candidate list");
  }
  std::set<DocumentId> known(documents.begin(), documents.end());
  std::map<DocumentId, long long> net;
  std::map<DocumentId, std::uint64_t> weight;
  for (const auto& [key, counts] : stats.entries()) {
    if (!known.contains(key.first) || !known.contains(key.second)) {
      throw MissingDocumentError(
          "votes mention a document missing from the candidate list");
    }
    net[key.first] += static_cast<long long>(counts.clicks);
    net[key.second] -= static_cast<long long>(counts.clicks);
    weight[key.first] += counts.impressions;
    weight[key.second] += counts.impressions;
  }
  std::stable_sort(documents.begin(), documents.end(),
                   [&](const DocumentId& a, const DocumentId& b) {
                     const auto net_a = net[a];
                     const auto net_b = net[b];
                     if (net_a != net_b) return net_a > net_b;
                     return weight[a] > weight[b];
                   });
  return RankedList{std::move(documents)};
}

std::vector<PreferenceVote> skip_above_extractor(
    const RankedList& presented, const std::vector<int>& clicked_ranks,
    std::string_view query_id) {
  const int n = presented.size();
  std::set<int> clicked;
  for (int rank : clicked_ranks) {
    if (rank < 1 || rank > n) {
      throw RankOutOfRangeError("clicked rank " + std::to_string(rank) +
                                " outside 1.." + std::to_string(n));
    }
    clicked.insert(rank);
  }
  std::vector<PreferenceVote> votes;
  for (int rank : clicked) {
    for (int above = 1; above < rank; ++above) {
      if (!clicked.contains(above)) {
        votes.push_back({presented.order[rank - 1], presented.order[above - 1],
                         std::string(query_id)});
      }
    }
  }
  return votes;
}

std::vector<AbsoluteVote> naive_extractor(const RankedList& presented,
                                          const std::vector<int>& clicked_ranks,
                                          std::string_view query_id) {
  const int n = presented.size();
  std::set<int> clicked;
  for (int rank : clicked_ranks) {
    if (rank < 1 || rank > n) {
      throw RankOutOfRangeError("clicked rank " + std::to_string(rank) +
                                " outside 1.." + std::to_string(n));
    }
    clicked.insert(rank);
  }
  std::vector<AbsoluteVote> votes;
  for (int rank : clicked) {
    votes.push_back({presented.order[rank - 1], std::string(query_id)});
  }
  return votes;
}

}  // namespace fairpairs
