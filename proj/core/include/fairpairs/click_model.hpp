// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "fairpairs/perturbation.hpp"
#include "fairpairs/rng.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// What a simulated user can see when deciding whether to click the bottom
// result of a pair: everything above it, the pair top, the bottom document
// itself, and everything below. The factored model family only reads r_top
// and r_bot, but the interface carries the full context so alternative
// families can be slotted in without changing call sites.
struct PairContext {
  std::vector<Relevance> above;
  Relevance r_top;
  Relevance r_bot;
  std::vector<Relevance> below;
};

// Parametric family of position-biased click models,
//
//   P(click at rank p) = clamp( E(p) * A(r) * G(r_above), 0, 1 )
//
// with examination decay E(p) = p^-position_decay, attraction
// A(r) = clamp(attraction_intercept + attraction_slope * r, 0, 1), and a
// predecessor factor G(r) = max(0, 1 + predecessor_gain * (r - 0.5)) applied
// whenever a document sits directly above (G = 1 at rank 1). All three
// factors read relevances only, so relabeling documents never changes a
// probability. cascade_stop is the probability that the user stops scanning
// after a click.
//
// The analytic entry points (click_probability, the score functions, and the
// verification helpers) insist on a strictly increasing attraction so that
// "more relevant" always means "more clicked". simulate_session deliberately
// accepts degenerate attractions (e.g. A identically 0 or saturated at 1) so
// pathological users remain expressible in simulations.
struct ClickModelSpec {
  double position_decay = 1.0;
  double attraction_intercept = 0.0;
  double attraction_slope = 1.0;
  double predecessor_gain = 0.1;
  double cascade_stop = 0.0;

  double examination(int rank) const;
  double attraction(Relevance r) const;
  double predecessor_factor(Relevance r) const;

  bool operator==(const ClickModelSpec&) const = default;
};

// Position bias plus a mild predecessor effect; the workhorse model.
ClickModelSpec default_model();
// No position bias, no predecessor effect: clicks depend on relevance only.
ClickModelSpec no_bias_model();
// Predecessor effect strong enough to drown out the document's own
// relevance. Built to defeat the estimator, as a negative control.
ClickModelSpec assumption2_violating_model();
// Default model plus a 50% chance of abandoning the list after each click.
ClickModelSpec cascade_model();
// Preset lookup by name ("default", "no_bias", "assumption2_violating",
// "cascade"). Throws Error for unknown names.
ClickModelSpec model_preset(std::string_view name);

// Full validation: finite parameters, position_decay >= 0, cascade_stop in
// [0, 1], and attraction strictly increasing across a fixed grid on [0, 1].
// Throws InvalidSpecError.
void validate_model(const ClickModelSpec& model);

// Probability that the simulated user clicks the bottom document of a pair
// presented at `presented_rank` (1-based). Throws InvalidSpecError for
// invalid models and RankOutOfRangeError for ranks below 1.
double click_probability(const ClickModelSpec& model, const PairContext& ctx,
                         int presented_rank);

// Simulates one user scanning a presented list top to bottom, clicking each
// rank independently with its model probability (subject to cascade
// abandonment). Returns the clicked ranks in increasing order. Throws
// MissingRelevanceError when a presented document has no entry in
// `relevances`.
std::vector<int> simulate_session(
    const ClickModelSpec& model, const PerturbedList& perturbed,
    const std::map<DocumentId, Relevance>& relevances, RngStream& rng);

// How much the bottom-slot click rate moves when the bottom document's
// relevance rises from `less` to `more`, everything else (notably the pair
// top) held fixed. Throws OrderViolationError unless more > less.
double item_relevance_score(const ClickModelSpec& model,
                            const PairContext& context, Relevance more,
                            Relevance less, int presented_rank);

// How much the bottom-slot click rate moves when the *top* document's
// relevance rises from `less` to `more`, the bottom document held fixed.
// This is the influence a click on the bottom is supposed to ignore.
double ignored_relevance_score(const ClickModelSpec& model,
                               const PairContext& context, Relevance more,
                               Relevance less, int presented_rank);

struct Assumption2Cell {
  double r_more = 0.0;
  double r_less = 0.0;
  int rank = 0;
  double delta_relevance = 0.0;
  double delta_ignored = 0.0;
  bool holds = false;
};

struct Assumption2Report {
  std::vector<Assumption2Cell> cells;
  bool overall = true;
};

// Checks the identifiability condition the estimator relies on: for every
// relevance pair in `grid` and every rank in `ranks`, raising the bottom
// document's relevance must move its click rate strictly more than raising
// the top document's relevance does (delta_relevance > delta_ignored).
// `grid` must be strictly increasing; ranks must be >= 1.
Assumption2Report verify_assumption2(const ClickModelSpec& model,
                                     const std::vector<Relevance>& grid,
                                     const std::vector<int>& ranks);

namespace detail {
// Shared per-rank click probability: document relevance `r_doc` presented at
// `rank` with a document of relevance `r_above` directly above (pass a
// negative value when nothing is above). No validation; callers are expected
// to have validated the model to the strictness they need.
double rank_click_probability(const ClickModelSpec& model, double r_doc,
                              double r_above, int rank);
}  // namespace detail

}  // namespace fairpairs
