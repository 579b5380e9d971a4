// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "fairpairs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fairpairs {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double require_number(const json& value, const std::string& what) {
  if (!value.is_number()) throw ConfigError(what + " must be a number");
  return value.get<double>();
}

std::uint64_t require_unsigned(const json& value, const std::string& what) {
  if (!value.is_number_unsigned()) {
    throw ConfigError(what + " must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

int require_int(const json& value, const std::string& what) {
  if (!value.is_number_integer()) {
    throw ConfigError(what + " must be an integer");
  }
  return value.get<int>();
}

ClickModelSpec parse_model(const json& value) {
  if (value.is_string()) {
    try {
      return model_preset(value.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(std::string("click_model: ") + e.what());
    }
  }
  if (!value.is_object()) {
    throw ConfigError("click_model must be a preset name or an object");
  }
  reject_unknown_keys(value,
                      {"position_decay", "attraction_intercept",
                       "attraction_slope", "predecessor_gain", "cascade_stop"},
                      "click_model");
  ClickModelSpec model;
  if (value.contains("position_decay")) {
    model.position_decay =
        require_number(value["position_decay"], "click_model.position_decay");
  }
  if (value.contains("attraction_intercept")) {
    model.attraction_intercept = require_number(
        value["attraction_intercept"], "click_model.attraction_intercept");
  }
  if (value.contains("attraction_slope")) {
    model.attraction_slope = require_number(value["attraction_slope"],
                                            "click_model.attraction_slope");
  }
  if (value.contains("predecessor_gain")) {
    model.predecessor_gain = require_number(value["predecessor_gain"],
                                            "click_model.predecessor_gain");
  }
  if (value.contains("cascade_stop")) {
    model.cascade_stop =
        require_number(value["cascade_stop"], "click_model.cascade_stop");
  }
  try {
    validate_model(model);
  } catch (const InvalidSpecError& e) {
    throw ConfigError(std::string("click_model: ") + e.what());
  }
  return model;
}

ProbeConfig parse_probe(const json& value, int num_docs) {
  if (!value.is_object()) throw ConfigError("probe must be an object");
  reject_unknown_keys(value,
                      {"probe_relevance", "target_rank_lo", "target_rank_hi",
                       "swap_before_fairpairs"},
                      "probe");
  ProbeConfig probe;
  if (value.contains("probe_relevance")) {
    probe.probe_relevance =
        require_number(value["probe_relevance"], "probe.probe_relevance");
  }
  if (probe.probe_relevance < 0.0 || probe.probe_relevance > 1.0) {
    throw ConfigError("probe.probe_relevance must lie in [0, 1]");
  }
  if (value.contains("target_rank_lo")) {
    probe.target_rank_lo =
        require_int(value["target_rank_lo"], "probe.target_rank_lo");
  }
  probe.target_rank_hi = num_docs;
  if (value.contains("target_rank_hi")) {
    probe.target_rank_hi =
        require_int(value["target_rank_hi"], "probe.target_rank_hi");
  }
  if (probe.target_rank_lo < 1 || probe.target_rank_hi < probe.target_rank_lo ||
      probe.target_rank_hi > num_docs + 1) {
    throw ConfigError("probe target ranks must satisfy 1 <= lo <= hi <= " +
                      std::to_string(num_docs + 1));
  }
  if (value.contains("swap_before_fairpairs")) {
    if (!value["swap_before_fairpairs"].is_boolean()) {
      throw ConfigError("probe.swap_before_fairpairs must be a boolean");
    }
    probe.swap_before_fairpairs = value["swap_before_fairpairs"].get<bool>();
  }
  return probe;
}

std::vector<Extractor> parse_extractors(const json& value) {
  if (!value.is_array()) throw ConfigError("extractors must be an array");
  std::vector<Extractor> out;
  for (const auto& entry : value) {
    if (!entry.is_string()) {
      throw ConfigError("extractors entries must be strings");
    }
    const auto name = entry.get<std::string>();
    if (name == "fairpairs") {
      out.push_back(Extractor::fairpairs);
    } else if (name == "skip_above") {
      out.push_back(Extractor::skip_above);
    } else if (name == "naive") {
      out.push_back(Extractor::naive);
    } else {
      throw ConfigError("unknown extractor '" + name + "'");
    }
  }
  if (out.empty()) throw ConfigError("extractors must not be empty");
  return out;
}

ExperimentConfig parse_config(const json& root) {
  if (!root.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  reject_unknown_keys(root,
                      {"seed", "num_queries", "num_docs", "relevance_source",
                       "click_model", "probe", "extractors"},
                      "configuration");
  ExperimentConfig config = default_config();
  if (root.contains("seed")) {
    config.seed = require_unsigned(root["seed"], "seed");
  }
  if (root.contains("num_queries")) {
    config.num_queries = require_unsigned(root["num_queries"], "num_queries");
  }

  bool num_docs_given = false;
  if (root.contains("num_docs")) {
    config.num_docs = require_int(root["num_docs"], "num_docs");
    num_docs_given = true;
  }

  if (root.contains("relevance_source")) {
    const auto& source = root["relevance_source"];
    if (source.is_string()) {
      config.relevances =
          relevance_preset(source.get<std::string>(), config.num_docs);
    } else if (source.is_array()) {
      std::vector<double> values;
      for (const auto& entry : source) {
        values.push_back(require_number(entry, "relevance_source entries"));
      }
      if (!num_docs_given) {
        config.num_docs = static_cast<int>(values.size());
      }
      config.relevances = std::move(values);
    } else {
      throw ConfigError(
          "relevance_source must be a preset name or an array of numbers");
    }
  } else {
    config.relevances = relevance_preset("linear", config.num_docs);
  }

  if (config.num_docs < 2) throw ConfigError("num_docs must be >= 2");
  if (static_cast<int>(config.relevances.size()) != config.num_docs) {
    throw ConfigError("relevance_source lists " +
                      std::to_string(config.relevances.size()) +
                      " values but num_docs is " +
                      std::to_string(config.num_docs));
  }
  for (double r : config.relevances) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ConfigError("relevances must lie in [0, 1]");
    }
  }

  if (root.contains("click_model")) {
    config.model = parse_model(root["click_model"]);
  }
  if (root.contains("probe")) {
    config.probe = parse_probe(root["probe"], config.num_docs);
  }
  if (root.contains("extractors")) {
    config.extractors = parse_extractors(root["extractors"]);
  }
  return config;
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.relevances = relevance_preset("linear", config.num_docs);
  return config;
}

std::vector<double> relevance_preset(std::string_view name, int num_docs) {
  if (num_docs < 2) throw ConfigError("relevance presets need num_docs >= 2");
  std::vector<double> values(num_docs);
  const double step = 0.8 / (num_docs - 1);
  for (int i = 0; i < num_docs; ++i) values[i] = 0.9 - step * i;
  if (name == "linear") return values;
  if (name == "linear_reversed") {
    return {values.rbegin(), values.rend()};
  }
  throw ConfigError("unknown relevance preset '" + std::string(name) + "'");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid configuration JSON: ") + e.what());
  }
  return parse_config(root);
}

ExperimentConfig load_config(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return load_config(in);
}

Query make_query(const ExperimentConfig& config, std::string query_id) {
  Query query;
  query.query_id = std::move(query_id);
  query.candidates.reserve(config.relevances.size());
  for (std::size_t i = 0; i < config.relevances.size(); ++i) {
    query.candidates.emplace_back(DocumentId{"d" + std::to_string(i + 1)},
                                  Relevance(config.relevances[i]));
  }
  return query;
}

}  // namespace fairpairs
