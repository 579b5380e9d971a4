// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/types.hpp"

#include <algorithm>
#include <set>

namespace fairpairs {

void validate(const Query& query) {
  if (query.candidates.empty()) {
    throw Error("query '" + query.query_id + "' has no candidates");
  }
  std::set<DocumentId> seen;
  for (const auto& [doc, rel] : query.candidates) {
    if (!seen.insert(doc).second) {
      throw Error("query '" + query.query_id + "' lists document '" +
                  doc.value + "' twice");
    }
  }
}

RankedList base_ranking(const Query& query) {
  validate(query);
  RankedList out;
  out.order.reserve(query.candidates.size());
  for (const auto& [doc, rel] : query.candidates) {
    out.order.push_back(doc);
  }
  return out;
}

Relevance relevance_of(const Query& query, const DocumentId& doc) {
  for (const auto& [candidate, rel] : query.candidates) {
    if (candidate == doc) return rel;
  }
  throw MissingDocumentError("document '" + doc.value +
                             "' is not a candidate of query '" +
                             query.query_id + "'");
}

TrueRanking true_ranking(const Query& query) {
  validate(query);
  auto sorted = query.candidates;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].second == sorted[i].second) {
      throw TiedRelevanceError("documents '" + sorted[i - 1].first.value +
                               "' and '" + sorted[i].first.value +
                               "' are tied at relevance " +
                               std::to_string(sorted[i].second.value()));
    }
  }
  TrueRanking out;
  out.order.reserve(sorted.size());
  for (const auto& [doc, rel] : sorted) {
    out.order.push_back(doc);
  }
  return out;
}

}  // namespace fairpairs
