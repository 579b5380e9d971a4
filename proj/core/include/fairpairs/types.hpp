// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "fairpairs/errors.hpp"

namespace fairpairs {

// Opaque token naming one retrievable document. Ids are only required to be
// unique within a single query's candidate set.
struct DocumentId {
  std::string value;
  auto operator<=>(const DocumentId&) const = default;
};

// Scalar relevance in [0, 1]. The algorithms only ever compare relevances, so
// the absolute scale carries no meaning beyond keeping simulated click
// probabilities well defined.
class Relevance {
 public:
  explicit Relevance(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error("relevance must lie in [0, 1]");
    }
  }
  double value() const noexcept { return value_; }
  auto operator<=>(const Relevance&) const = default;

 private:
  double value_;
};

// One query together with its candidate documents, listed in the order the
// base ranker would present them.
struct Query {
  std::string query_id;
  std::vector<std::pair<DocumentId, Relevance>> candidates;
};

// A permutation of one query's candidates, most relevant position first.
struct RankedList {
  std::vector<DocumentId> order;
  int size() const noexcept { return static_cast<int>(order.size()); }
  bool operator==(const RankedList&) const = default;
};

// Candidates sorted by strictly decreasing relevance. Distinct from
// RankedList on purpose: a TrueRanking certifies that the order agrees with
// the relevance labels, a RankedList makes no such promise.
struct TrueRanking {
  std::vector<DocumentId> order;
  bool operator==(const TrueRanking&) const = default;
};

// Throws Error unless the query has at least one candidate with distinct ids.
void validate(const Query& query);

// Candidates in base-ranker order, i.e. exactly as listed in the query.
RankedList base_ranking(const Query& query);

// Relevance of one candidate. Throws MissingDocumentError for unknown ids.
Relevance relevance_of(const Query& query, const DocumentId& doc);

// Sorts candidates by strictly decreasing relevance. Throws
// TiedRelevanceError when two candidates share a relevance, since no strict
// total order exists in that case.
TrueRanking true_ranking(const Query& query);

}  // namespace fairpairs
