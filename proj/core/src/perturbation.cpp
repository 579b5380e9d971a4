// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/perturbation.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>

namespace fairpairs {

PairAssignment assign_pairs(int n, int k) {
  if (n < 1) throw Error("assign_pairs: list length must be >= 1");
  if (k != 0 && k != 1) throw Error("assign_pairs: offset must be 0 or 1");
  PairAssignment out;
  if (k == 1) out.unpaired.push_back(1);
  for (int top = 1 + k; top + 1 <= n; top += 2) {
    out.pairs.push_back({top, top + 1});
  }
  const int covered = k + 2 * static_cast<int>(out.pairs.size());
  for (int rank = covered + 1; rank <= n; ++rank) {
    out.unpaired.push_back(rank);
  }
  return out;
}

FlipPlan draw_flip_plan(int n, RngStream& rng) {
  FlipPlan plan;
  plan.k = static_cast<int>(rng.uniform_int(2));
  const auto assignment = assign_pairs(n, plan.k);
  plan.swap_flags.reserve(assignment.pairs.size());
  for (std::size_t i = 0; i < assignment.pairs.size(); ++i) {
    plan.swap_flags.push_back(rng.bernoulli(0.5));
  }
  return plan;
}

PerturbedList apply_flip_plan(const RankedList& input, const FlipPlan& plan) {
  const auto assignment = assign_pairs(input.size(), plan.k);
  if (plan.swap_flags.size() != assignment.pairs.size()) {
    throw PlanSizeMismatchError(
        "flip plan has " + std::to_string(plan.swap_flags.size()) +
        " swap flags but (n=" + std::to_string(input.size()) +
        ", k=" + std::to_string(plan.k) + ") forms " +
        std::to_string(assignment.pairs.size()) + " pairs");
  }
  PerturbedList out{input, plan, input};
  for (std::size_t i = 0; i < assignment.pairs.size(); ++i) {
    if (plan.swap_flags[i]) {
      const auto& pair = assignment.pairs[i];
      std::swap(out.order.order[pair.top - 1], out.order.order[pair.bottom - 1]);
    }
  }
  return out;
}

namespace {

void check_clicked_ranks(const std::vector<int>& clicked_ranks, int n) {
  for (int rank : clicked_ranks) {
    if (rank < 1 || rank > n) {
      throw RankOutOfRangeError("clicked rank " + std::to_string(rank) +
                                " outside 1.." + std::to_string(n));
    }
  }
}

}  // namespace

std::vector<PreferenceVote> extract_preferences(
    const PerturbedList& perturbed, const std::vector<int>& clicked_ranks,
    std::string_view query_id) {
  const int n = perturbed.order.size();
  check_clicked_ranks(clicked_ranks, n);
  const auto assignment = assign_pairs(n, perturbed.plan.k);
  // top_above[r] is the pair top above rank r, or 0 when r is not a bottom.
  std::vector<int> top_above(n + 1, 0);
  for (const auto& pair : assignment.pairs) {
    top_above[pair.bottom] = pair.top;
  }
  std::vector<PreferenceVote> votes;
  for (int rank : clicked_ranks) {
    if (const int top = top_above[rank]; top != 0) {
      votes.push_back({perturbed.order.order[rank - 1],
                       perturbed.order.order[top - 1],
                       std::string(query_id)});
    }
  }
  return votes;
}

std::vector<PreferenceVote> extract_top_preferences(
    const PerturbedList& perturbed, const std::vector<int>& clicked_ranks,
    std::string_view query_id) {
  const int n = perturbed.order.size();
  check_clicked_ranks(clicked_ranks, n);
  const auto assignment = assign_pairs(n, perturbed.plan.k);
  std::vector<int> bottom_below(n + 1, 0);
  for (const auto& pair : assignment.pairs) {
    bottom_below[pair.top] = pair.bottom;
  }
  std::vector<PreferenceVote> votes;
  for (int rank : clicked_ranks) {
    if (const int bottom = bottom_below[rank]; bottom != 0) {
      votes.push_back({perturbed.order.order[rank - 1],
                       perturbed.order.order[bottom - 1],
                       std::string(query_id)});
    }
  }
  return votes;
}

std::vector<std::vector<double>> marginal_rank_distribution(int n) {
  if (n < 1) throw Error("marginal_rank_distribution: n must be >= 1");
  if (n > 30) {
    throw Error("marginal_rank_distribution: exhaustive enumeration is not "
                "feasible beyond n = 30");
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int k = 0; k <= 1; ++k) {
    const auto assignment = assign_pairs(n, k);
    const auto num_pairs = assignment.pairs.size();
    const std::uint64_t outcomes = std::uint64_t{1} << num_pairs;
    // Each offset has probability 1/2, each flag pattern 1/2^pairs.
    const double weight = 0.5 / static_cast<double>(outcomes);
    std::vector<int> position(n);
    for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
      std::iota(position.begin(), position.end(), 1);
      for (std::size_t p = 0; p < num_pairs; ++p) {
        if (mask >> p & 1) {
          const auto& pair = assignment.pairs[p];
          std::swap(position[pair.top - 1], position[pair.bottom - 1]);
        }
      }
      for (int i = 0; i < n; ++i) {
        dist[position[i] - 1][i] += weight;
      }
    }
  }
  return dist;
}

}  // namespace fairpairs
