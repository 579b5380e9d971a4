// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/click_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairpairs {

double ClickModelSpec::examination(int rank) const {
  return std::pow(static_cast<double>(rank), -position_decay);
}

double ClickModelSpec::attraction(Relevance r) const {
  return std::clamp(attraction_intercept + attraction_slope * r.value(), 0.0,
                    1.0);
}

double ClickModelSpec::predecessor_factor(Relevance r) const {
  return std::max(0.0, 1.0 + predecessor_gain * (r.value() - 0.5));
}

ClickModelSpec default_model() { return {}; }

ClickModelSpec no_bias_model() {
  ClickModelSpec m;
  m.position_decay = 0.0;
  m.predecessor_gain = 0.0;
  return m;
}

ClickModelSpec assumption2_violating_model() {
  ClickModelSpec m;
  m.attraction_intercept = 0.3;
  m.attraction_slope = 0.05;
  m.predecessor_gain = 5.0;
  return m;
}

ClickModelSpec cascade_model() {
  ClickModelSpec m;
  m.cascade_stop = 0.5;
  return m;
}

ClickModelSpec model_preset(std::string_view name) {
  if (name == "default") return default_model();
  if (name == "no_bias") return no_bias_model();
  if (name == "assumption2_violating") return assumption2_violating_model();
  if (name == "cascade") return cascade_model();
  throw Error("unknown click model preset '" + std::string(name) + "'");
}

namespace {

void validate_sampling_params(const ClickModelSpec& model) {
  if (!std::isfinite(model.position_decay) ||
      !std::isfinite(model.attraction_intercept) ||
      !std::isfinite(model.attraction_slope) ||
      !std::isfinite(model.predecessor_gain) ||
      !std::isfinite(model.cascade_stop)) {
    throw InvalidSpecError("click model parameters must be finite");
  }
  if (model.position_decay < 0.0) {
    throw InvalidSpecError("position_decay must be >= 0");
  }
  if (model.cascade_stop < 0.0 || model.cascade_stop > 1.0) {
    throw InvalidSpecError("cascade_stop must lie in [0, 1]");
  }
}

}  // namespace

void validate_model(const ClickModelSpec& model) {
  validate_sampling_params(model);
  // Strict monotonicity check on a fixed grid: clamping may flatten an
  // otherwise increasing attraction, and a flat stretch would break the link
  // between relevance order and click-rate order.
  constexpr int kGridSteps = 20;
  double prev = model.attraction(Relevance(0.0));
  for (int i = 1; i <= kGridSteps; ++i) {
    const double cur =
        model.attraction(Relevance(static_cast<double>(i) / kGridSteps));
    if (!(cur > prev)) {
      throw InvalidSpecError(
          "attraction must be strictly increasing on [0, 1]; it is not at r=" +
          std::to_string(static_cast<double>(i) / kGridSteps));
    }
    prev = cur;
  }
}

namespace detail {

double rank_click_probability(const ClickModelSpec& model, double r_doc,
                              double r_above, int rank) {
  const double exam = model.examination(rank);
  const double attract = model.attraction(Relevance(r_doc));
  const double pred =
      r_above < 0.0 ? 1.0 : model.predecessor_factor(Relevance(r_above));
  return std::clamp(exam * attract * pred, 0.0, 1.0);
}

}  // namespace detail

double click_probability(const ClickModelSpec& model, const PairContext& ctx,
                         int presented_rank) {
  validate_model(model);
  if (presented_rank < 1) {
    throw RankOutOfRangeError("presented rank must be >= 1");
  }
  return detail::rank_click_probability(model, ctx.r_bot.value(),
                                        ctx.r_top.value(), presented_rank);
}

std::vector<int> simulate_session(
    const ClickModelSpec& model, const PerturbedList& perturbed,
    const std::map<DocumentId, Relevance>& relevances, RngStream& rng) {
  validate_sampling_params(model);
  const int n = perturbed.order.size();
  std::vector<double> rel(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto it = relevances.find(perturbed.order.order[i]);
    if (it == relevances.end()) {
      throw MissingRelevanceError("no relevance for document '" +
                                  perturbed.order.order[i].value + "'");
    }
    rel[i] = it->second.value();
  }
  std::vector<int> clicked;
  for (int rank = 1; rank <= n; ++rank) {
    const double r_above = rank == 1 ? -1.0 : rel[rank - 2];
    const double p =
        detail::rank_click_probability(model, rel[rank - 1], r_above, rank);
    if (rng.bernoulli(p)) {
      clicked.push_back(rank);
      // The stop draw is only taken when abandonment is enabled, so a model
      // with cascade_stop == 0 consumes exactly the same stream as one
      // without the feature.
      if (model.cascade_stop > 0.0 && rng.bernoulli(model.cascade_stop)) {
        break;
      }
    }
  }
  return clicked;
}

namespace {

double bottom_click_probability(const ClickModelSpec& model,
                                const PairContext& ctx, Relevance r_bot,
                                int rank) {
  PairContext c = ctx;
  c.r_bot = r_bot;
  return click_probability(model, c, rank);
}

double bottom_click_probability_with_top(const ClickModelSpec& model,
                                         const PairContext& ctx,
                                         Relevance r_top, int rank) {
  PairContext c = ctx;
  c.r_top = r_top;
  return click_probability(model, c, rank);
}

}  // namespace

double item_relevance_score(const ClickModelSpec& model,
                            const PairContext& context, Relevance more,
                            Relevance less, int presented_rank) {
  if (!(more > less)) {
    throw OrderViolationError(
        "item_relevance_score: first relevance must exceed the second");
  }
  return bottom_click_probability(model, context, more, presented_rank) -
         bottom_click_probability(model, context, less, presented_rank);
}

double ignored_relevance_score(const ClickModelSpec& model,
                               const PairContext& context, Relevance more,
                               Relevance less, int presented_rank) {
  if (!(more > less)) {
    throw OrderViolationError(
        "ignored_relevance_score: first relevance must exceed the second");
  }
  return bottom_click_probability_with_top(model, context, more,
                                           presented_rank) -
         bottom_click_probability_with_top(model, context, less,
                                           presented_rank);
}

Assumption2Report verify_assumption2(const ClickModelSpec& model,
                                     const std::vector<Relevance>& grid,
                                     const std::vector<int>& ranks) {
  validate_model(model);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error("verify_assumption2: grid must be strictly increasing");
    }
  }
  for (int rank : ranks) {
    if (rank < 1) throw RankOutOfRangeError("ranks must be >= 1");
  }
  Assumption2Report report;
  for (int rank : ranks) {
    for (std::size_t lo = 0; lo < grid.size(); ++lo) {
      for (std::size_t hi = lo + 1; hi < grid.size(); ++hi) {
        const Relevance less = grid[lo];
        const Relevance more = grid[hi];
        // Both deltas are taken at the same baseline context: top and bottom
        // start at the lower relevance, then one of the two is raised.
        const PairContext base{{}, less, less, {}};
        Assumption2Cell cell;
        cell.r_more = more.value();
        cell.r_less = less.value();
        cell.rank = rank;
        cell.delta_relevance =
            item_relevance_score(model, base, more, less, rank);
        cell.delta_ignored =
            ignored_relevance_score(model, base, more, less, rank);
        cell.holds = cell.delta_relevance > cell.delta_ignored;
        report.overall = report.overall && cell.holds;
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

}  // namespace fairpairs
