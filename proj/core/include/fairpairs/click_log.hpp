// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpairs/perturbation.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// Where an impression's randomness came from: the run-wide experiment seed
// plus the impression's index. Together they reproduce every draw.
struct SeedInfo {
  std::uint64_t experiment_seed = 0;
  std::uint64_t query_index = 0;
  bool operator==(const SeedInfo&) const = default;
};

// One logged impression, carrying enough to replay vote extraction exactly:
// the flip plan, the list it was applied to, the resulting presented order,
// and which presented ranks were clicked (1-based, strictly increasing).
// Invariant: presented_order == apply_flip_plan(original_order, plan).order.
struct ClickLogRecord {
  std::string query_id;
  FlipPlan plan;
  RankedList original_order;
  RankedList presented_order;
  std::vector<int> clicked_ranks;
  SeedInfo seed_info;
  bool operator==(const ClickLogRecord&) const = default;
};

}  // namespace fairpairs
