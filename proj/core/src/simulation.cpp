// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/simulation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "fairpairs/statistics.hpp"

namespace fairpairs {

namespace detail {

SimContext make_context(const Query& query, const ClickModelSpec& model) {
  SimContext ctx;
  ctx.base = base_ranking(query);
  for (const auto& [doc, rel] : query.candidates) {
    ctx.relevances.emplace(doc, rel);
  }
  ctx.model = model;
  return ctx;
}

ClickLogRecord simulate_impression(const SimContext& ctx, std::uint64_t seed,
                                   std::uint64_t index) {
  auto rng = RngStream::derived(seed, index);
  const auto plan = draw_flip_plan(ctx.base.size(), rng);
  auto perturbed = apply_flip_plan(ctx.base, plan);
  auto clicked = simulate_session(ctx.model, perturbed, ctx.relevances, rng);

  ClickLogRecord record;
  record.query_id = "q" + std::to_string(index + 1);
  record.plan = std::move(perturbed.plan);
  record.original_order = std::move(perturbed.original);
  record.presented_order = std::move(perturbed.order);
  record.clicked_ranks = std::move(clicked);
  record.seed_info = {seed, index};
  return record;
}

}  // namespace detail

ClickLogRecord simulate_impression(const Query& query,
                                   const ClickModelSpec& model,
                                   std::uint64_t seed, std::uint64_t index) {
  return detail::simulate_impression(detail::make_context(query, model), seed,
                                     index);
}

namespace {

bool wants(const ExperimentConfig& config, Extractor extractor) {
  return std::find(config.extractors.begin(), config.extractors.end(),
                   extractor) != config.extractors.end();
}

// Online accumulation of the paired counts for a freshly built record. Same
// tallies as record_votes, minus the replay validation that a record
// arriving from disk needs. The two paths are held equal by tests.
void accumulate_paired(PairStats& stats, const ClickLogRecord& record) {
  const int n = record.presented_order.size();
  std::vector<std::uint64_t> clicks_at(n + 1, 0);
  for (int rank : record.clicked_ranks) clicks_at[rank] += 1;
  const auto assignment = assign_pairs(n, record.plan.k);
  for (const auto& pair : assignment.pairs) {
    stats.add_impression(record.presented_order.order[pair.bottom - 1],
                         record.presented_order.order[pair.top - 1],
                         clicks_at[pair.bottom]);
  }
}

}  // namespace

SimulationResult run_simulation(const ExperimentConfig& config) {
  SimulationResult result;
  result.query = make_query(config, "q");
  const auto ctx = detail::make_context(result.query, config.model);
  const bool want_paired = wants(config, Extractor::fairpairs);
  const bool want_skip = wants(config, Extractor::skip_above);
  const bool want_naive = wants(config, Extractor::naive);
  result.naive_rank_votes.assign(config.num_docs, 0);
  result.log.reserve(config.num_queries);

  for (std::uint64_t i = 0; i < config.num_queries; ++i) {
    auto record = detail::simulate_impression(ctx, config.seed, i);
    if (want_paired) {
      accumulate_paired(result.fairpairs, record);
    }
    if (want_skip) {
      for (const auto& vote :
           skip_above_extractor(record.presented_order, record.clicked_ranks,
                                record.query_id)) {
        result.skip_above.add_preference(vote.winner, vote.loser);
      }
    }
    if (want_naive) {
      for (const auto& vote : naive_extractor(
               record.presented_order, record.clicked_ranks, record.query_id)) {
        const auto& order = record.presented_order.order;
        const auto it = std::find(order.begin(), order.end(), vote.doc);
        result.naive_rank_votes[it - order.begin()] += 1;
      }
    }
    result.log.push_back(std::move(record));
  }
  return result;
}

PairProbabilities adjacent_pair_probabilities(const Query& query,
                                              const ClickModelSpec& model) {
  validate_model(model);
  if (model.cascade_stop != 0.0) {
    throw Error(
        "adjacent_pair_probabilities: the closed form assumes independent "
        "clicks, set cascade_stop to 0");
  }
  validate(query);
  PairProbabilities out;
  for (std::size_t r = 0; r + 1 < query.candidates.size(); ++r) {
    const auto& [doc_a, rel_a] = query.candidates[r];
    const auto& [doc_b, rel_b] = query.candidates[r + 1];
    // When these two documents share a pair it occupies base ranks
    // (r+1, r+2); swapping exchanges the documents between the two slots,
    // so the bottom slot sits at rank r+2 in either orientation.
    const int bottom_rank = static_cast<int>(r) + 2;
    out[{doc_b, doc_a}] =
        click_probability(model, PairContext{{}, rel_a, rel_b, {}}, bottom_rank);
    out[{doc_a, doc_b}] =
        click_probability(model, PairContext{{}, rel_b, rel_a, {}}, bottom_rank);
  }
  return out;
}

const ReportRow* ReportTable::find(const std::string& label) const {
  for (const auto& row : rows) {
    if (row.label == label) return &row;
  }
  return nullptr;
}

namespace {

constexpr int kProbeLabelKey = std::numeric_limits<int>::max();

struct LabelKey {
  int top = 0;
  int bottom = 0;
  auto operator<=>(const LabelKey&) const = default;
};

std::string group_of(const LabelKey& key) {
  if (key.top == kProbeLabelKey) return "probe_top";
  if (key.bottom == kProbeLabelKey) return "probe_bottom";
  if (key.bottom == key.top + 1) return "normal";
  if (key.bottom == key.top - 1) return "reversed";
  return "other";
}

}  // namespace

ReportTable build_report_table(const std::vector<ClickLogRecord>& log,
                               const RankedList& base,
                               const std::optional<DocumentId>& probe_doc,
                               double confidence) {
  std::map<DocumentId, int> base_rank;
  for (int i = 0; i < base.size(); ++i) base_rank.emplace(base.order[i], i + 1);

  auto key_of = [&](const DocumentId& doc) -> int {
    if (probe_doc && doc == *probe_doc) return kProbeLabelKey;
    const auto it = base_rank.find(doc);
    if (it == base_rank.end()) {
      throw MissingDocumentError("document '" + doc.value +
                                 "' has no base rank and is not the probe");
    }
    return it->second;
  };

  std::map<LabelKey, PairCounts> per_label;
  for (const auto& record : log) {
    const int n = record.presented_order.size();
    std::vector<std::uint64_t> clicks_at(n + 1, 0);
    for (int rank : record.clicked_ranks) {
      if (rank < 1 || rank > n) {
        throw RankOutOfRangeError("clicked rank " + std::to_string(rank) +
                                  " outside 1.." + std::to_string(n));
      }
      clicks_at[rank] += 1;
    }
    const auto assignment = assign_pairs(n, record.plan.k);
    for (const auto& pair : assignment.pairs) {
      const LabelKey key{
          key_of(record.presented_order.order[pair.top - 1]),
          key_of(record.presented_order.order[pair.bottom - 1])};
      auto& counts = per_label[key];
      counts.impressions += 1;
      counts.clicks += clicks_at[pair.bottom];
    }
  }

  std::map<std::string, PairCounts> per_group;
  for (const auto& [key, counts] : per_label) {
    auto& group = per_group[group_of(key)];
    group.impressions += counts.impressions;
    group.clicks += counts.clicks;
  }

  auto make_row = [&](const std::string& label, const PairCounts& counts) {
    ReportRow row;
    row.label = label;
    row.impressions = counts.impressions;
    row.clicks = counts.clicks;
    row.p_hat = static_cast<double>(counts.clicks) /
                static_cast<double>(counts.impressions);
    const auto ci = wilson_interval(counts.clicks, counts.impressions, confidence);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    return row;
  };

  ReportTable table;
  for (const char* group :
       {"normal", "reversed", "probe_bottom", "probe_top", "other"}) {
    const auto it = per_group.find(group);
    if (it != per_group.end()) table.rows.push_back(make_row(group, it->second));
  }
  for (const auto& [key, counts] : per_label) {
    const auto part = [](int k) {
      return k == kProbeLabelKey ? std::string("#") : std::to_string(k);
    };
    table.rows.push_back(make_row(part(key.top) + "-" + part(key.bottom), counts));
  }
  return table;
}

ProbeResult run_probe_experiment(const ExperimentConfig& config) {
  if (!config.probe.has_value()) {
    throw Error("run_probe_experiment: configuration has no probe block");
  }
  const ProbeConfig& probe = *config.probe;
  for (double r : config.relevances) {
    if (!(probe.probe_relevance < r)) {
      throw ProbeRelevanceError(
          "probe relevance must be strictly below every regular relevance");
    }
  }
  ProbeResult result;
  result.probe_doc = DocumentId{"probe"};
  result.query = make_query(config, "q");
  result.query.candidates.emplace_back(result.probe_doc,
                                       Relevance(probe.probe_relevance));
  const int n = static_cast<int>(result.query.candidates.size());
  if (probe.target_rank_lo < 1 || probe.target_rank_hi < probe.target_rank_lo ||
      probe.target_rank_hi > n) {
    throw Error("run_probe_experiment: probe target ranks must satisfy 1 <= "
                "lo <= hi <= " +
                std::to_string(n));
  }

  const auto ctx = detail::make_context(result.query, config.model);
  const std::uint32_t span =
      static_cast<std::uint32_t>(probe.target_rank_hi - probe.target_rank_lo + 1);
  result.log.reserve(config.num_queries);

  for (std::uint64_t i = 0; i < config.num_queries; ++i) {
    auto rng = RngStream::derived(config.seed, i);
    // Fixed draw order per impression: flip plan, probe target, session.
    const auto plan = draw_flip_plan(n, rng);
    const int target =
        probe.target_rank_lo + static_cast<int>(rng.uniform_int(span));

    PerturbedList perturbed;
    if (probe.swap_before_fairpairs) {
      // Place the probe first; the pair randomization then acts on the
      // probed list, so the probe can drift one further rank.
      RankedList original = ctx.base;
      std::swap(original.order[n - 1], original.order[target - 1]);
      perturbed = apply_flip_plan(original, plan);
    } else {
      // Randomize first, then swap the probe to its target. The logged
      // original is the plan's pre-image of what was presented (the plan is
      // an involution), keeping the replay invariant intact.
      perturbed = apply_flip_plan(ctx.base, plan);
      auto& order = perturbed.order.order;
      const auto it =
          std::find(order.begin(), order.end(), result.probe_doc);
      std::swap(*it, order[target - 1]);
      perturbed.original = apply_flip_plan(perturbed.order, plan).order;
    }
    const auto clicked =
        simulate_session(config.model, perturbed, ctx.relevances, rng);

    ClickLogRecord record;
    record.query_id = "q" + std::to_string(i + 1);
    record.plan = plan;
    record.original_order = std::move(perturbed.original);
    record.presented_order = std::move(perturbed.order);
    record.clicked_ranks = clicked;
    record.seed_info = {config.seed, i};
    result.log.push_back(std::move(record));
  }

  result.table = build_report_table(result.log, ctx.base, result.probe_doc);
  return result;
}

}  // namespace fairpairs
