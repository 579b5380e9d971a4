// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpairs/click_model.hpp"
#include "fairpairs/types.hpp"

namespace fairpairs {

// Which vote streams a simulation run accumulates.
enum class Extractor { fairpairs, skip_above, naive };

// Probe setup: one extra document of known low relevance is appended to the
// candidate set and, per impression, moved to a uniformly drawn target rank
// so its click rate can be read off at every position.
struct ProbeConfig {
  double probe_relevance = 0.05;
  int target_rank_lo = 1;
  int target_rank_hi = 1;
  // When true, the probe is moved into place first and the pair
  // randomization runs on the already-probed list; when false (default) the
  // randomization runs first and the probe is then swapped to its target.
  bool swap_before_fairpairs = false;
  bool operator==(const ProbeConfig&) const = default;
};

// Fully resolved description of one simulation run.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::uint64_t num_queries = 10000;
  int num_docs = 6;
  std::vector<double> relevances;  // size == num_docs, each in [0, 1]
  ClickModelSpec model;
  std::optional<ProbeConfig> probe;
  std::vector<Extractor> extractors{Extractor::fairpairs};
  bool operator==(const ExperimentConfig&) const = default;
};

// The default run: 6 documents with linearly spaced relevances under the
// default click model, collecting the paired votes only.
ExperimentConfig default_config();

// Named relevance ladders: "linear" spaces num_docs values evenly from 0.9
// down to 0.1; "linear_reversed" is the same ladder ascending (a worst-case
// base ranker). Throws ConfigError for unknown names or num_docs < 2.
std::vector<double> relevance_preset(std::string_view name, int num_docs);

// Parses a JSON experiment configuration. Recognized keys: seed,
// num_queries, num_docs, relevance_source (preset name or explicit array),
// click_model (preset name or parameter object), probe (object), extractors
// (array of names). Unknown keys anywhere are ConfigErrors, as are values
// out of range; missing keys fall back to default_config().
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

// The candidate set the configuration describes: documents d1..dN in listed
// order with the configured relevances. The id only matters when the query
// feeds a log, so it may be omitted for analytic uses.
Query make_query(const ExperimentConfig& config, std::string query_id = "q");

}  // namespace fairpairs
