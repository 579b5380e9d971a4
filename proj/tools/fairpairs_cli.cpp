// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
//
// Command line front end for the FairPairs library. Subcommands:
//
//   simulate   run a simulated experiment, write the click log and stats
//   probe      run the low-relevance probe experiment, write report CSVs
//   aggregate  replay a click log into pair statistics
//   learn      derive a ranking from pair statistics
//   report     tally a click log into per-pair report CSVs
//   verify     run the built-in empirical checks
//
// Exit codes: 0 success, 1 usage/configuration/runtime error, 2 a
// verification check failed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpairs/config.hpp"
#include "fairpairs/errors.hpp"
#include "fairpairs/learner.hpp"
#include "fairpairs/log_io.hpp"
#include "fairpairs/pair_stats.hpp"
#include "fairpairs/report.hpp"
#include "fairpairs/simulation.hpp"
#include "fairpairs/verify.hpp"

namespace {

using nlohmann::json;

// Options shared by the subcommands that run simulations. Flags mirror the
// configuration file keys; when both a flag and a file key are given, the
// file wins and the collision is reported on stderr.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> num_queries;
  std::optional<int> num_docs;
  std::string relevances;  // preset name or comma-separated values
  std::string model;       // preset name
  std::vector<std::string> extractors;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON experiment configuration file");
  cmd->add_option("--seed", flags.seed, "Experiment seed");
  cmd->add_option("--queries", flags.num_queries,
                  "Number of simulated impressions");
  cmd->add_option("--docs", flags.num_docs, "Number of candidate documents");
  cmd->add_option("--relevances", flags.relevances,
                  "Relevance preset name or comma-separated values");
  cmd->add_option("--model", flags.model, "Click model preset name");
  cmd->add_option("--extractors", flags.extractors,
                  "Vote extractors (fairpairs, skip_above, naive)")
      ->delimiter(',');
}

json flags_to_json(const ConfigFlags& flags) {
  json j = json::object();
  if (flags.seed) j["seed"] = *flags.seed;
  if (flags.num_queries) j["num_queries"] = *flags.num_queries;
  if (flags.num_docs) j["num_docs"] = *flags.num_docs;
  if (!flags.relevances.empty()) {
    // A value with commas or digits-only tokens is an explicit list;
    // anything else is a preset name.
    if (flags.relevances.find(',') != std::string::npos ||
        flags.relevances.find_first_not_of("0123456789.") ==
            std::string::npos) {
      json values = json::array();
      std::stringstream stream(flags.relevances);
      std::string token;
      while (std::getline(stream, token, ',')) {
        try {
          values.push_back(std::stod(token));
        } catch (const std::exception&) {
          throw fairpairs::ConfigError("bad relevance value '" + token + "'");
        }
      }
      j["relevance_source"] = std::move(values);
    } else {
      j["relevance_source"] = flags.relevances;
    }
  }
  if (!flags.model.empty()) j["click_model"] = flags.model;
  if (!flags.extractors.empty()) j["extractors"] = flags.extractors;
  return j;
}

// Resolves the effective configuration: file keys win over flags, flags fill
// the gaps, defaults fill the rest. One validation path for everything.
fairpairs::ExperimentConfig resolve_config(const ConfigFlags& flags) {
  json merged = flags_to_json(flags);
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      throw fairpairs::IoError("cannot open '" + flags.config_path + "'");
    }
    json from_file;
    try {
      from_file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw fairpairs::ConfigError(std::string("invalid configuration JSON: ") +
                                   e.what());
    }
    if (!from_file.is_object()) {
      throw fairpairs::ConfigError("configuration must be a JSON object");
    }
    for (const auto& [key, value] : from_file.items()) {
      if (merged.contains(key)) {
        std::cerr << "warning: configuration file overrides --"
                  << (key == "relevance_source" ? "relevances" : key)
                  << std::endl;
      }
      merged[key] = value;
    }
  }
  return fairpairs::config_from_json_text(merged.dump());
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw fairpairs::IoError("cannot open '" + path.string() +
                             "' for writing");
  }
  out << content;
  out.flush();
  if (!out) throw fairpairs::IoError("failed writing '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw fairpairs::IoError("cannot create directory '" + dir.string() +
                             "': " + ec.message());
  }
}

int run_simulate(const ConfigFlags& flags, const std::string& out_dir,
                 bool timestamps) {
  const auto config = resolve_config(flags);
  const auto result = fairpairs::run_simulation(config);
  const std::filesystem::path dir(out_dir);
  ensure_directory(dir);
  fairpairs::write_log(result.log, dir / "log.ndjson", timestamps);

  auto has = [&](fairpairs::Extractor e) {
    return std::find(config.extractors.begin(), config.extractors.end(), e) !=
           config.extractors.end();
  };
  if (has(fairpairs::Extractor::fairpairs)) {
    std::ostringstream csv;
    fairpairs::write_stats_csv(result.fairpairs, csv);
    write_text_file(dir / "stats_fairpairs.csv", csv.str());
  }
  if (has(fairpairs::Extractor::skip_above)) {
    std::ostringstream csv;
    fairpairs::write_stats_csv(result.skip_above, csv);
    write_text_file(dir / "stats_skip_above.csv", csv.str());
  }
  if (has(fairpairs::Extractor::naive)) {
    std::ostringstream csv;
    csv << "rank,votes\n";
    for (std::size_t r = 0; r < result.naive_rank_votes.size(); ++r) {
      csv << (r + 1) << ',' << result.naive_rank_votes[r] << '\n';
    }
    write_text_file(dir / "naive_votes.csv", csv.str());
  }
  std::cout << "wrote " << result.log.size() << " impressions to " << out_dir
            << std::endl;
  return 0;
}

int run_probe(const ConfigFlags& flags, const std::string& out_dir,
              bool timestamps) {
  const auto config = resolve_config(flags);
  const auto result = fairpairs::run_probe_experiment(config);
  const std::filesystem::path dir(out_dir);
  ensure_directory(dir);
  fairpairs::write_log(result.log, dir / "log.ndjson", timestamps);
  std::ostringstream csv;
  fairpairs::write_report_csv(result.table, csv);
  write_text_file(dir / "report.csv", csv.str());
  fairpairs::emit_report(result.table, dir);
  std::cout << "wrote " << result.log.size() << " probed impressions to "
            << out_dir << std::endl;
  return 0;
}

int run_aggregate(const std::string& log_path, const std::string& out_path,
                  const std::string& extractor) {
  const auto log = fairpairs::read_log(log_path);
  fairpairs::PairStats stats;
  if (extractor == "fairpairs") {
    for (const auto& record : log) fairpairs::record_votes(stats, record);
  } else if (extractor == "skip_above") {
    for (const auto& record : log) {
      for (const auto& vote : fairpairs::skip_above_extractor(
               record.presented_order, record.clicked_ranks,
               record.query_id)) {
        stats.add_preference(vote.winner, vote.loser);
      }
    }
  } else {
    throw fairpairs::ConfigError("unknown extractor '" + extractor +
                                 "' (expected fairpairs or skip_above)");
  }
  std::ostringstream csv;
  fairpairs::write_stats_csv(stats, csv);
  write_text_file(out_path, csv.str());
  std::cout << "aggregated " << log.size() << " impressions into " << out_path
            << std::endl;
  return 0;
}

int run_learn(const std::string& stats_path, const std::string& method,
              const std::string& out_path) {
  std::ifstream in(stats_path);
  if (!in) throw fairpairs::IoError("cannot open '" + stats_path + "'");
  const auto stats = fairpairs::read_stats_csv(in);
  const auto docs = stats.documents();
  fairpairs::RankedList ranking;
  if (method == "exhaustive") {
    ranking = fairpairs::minimize_error_exhaustive(stats, docs);
  } else if (method == "greedy") {
    ranking = fairpairs::minimize_error_greedy(stats, docs);
  } else if (method == "auto") {
    ranking = docs.size() <= 10
                  ? fairpairs::minimize_error_exhaustive(stats, docs)
                  : fairpairs::minimize_error_greedy(stats, docs);
  } else {
    throw fairpairs::ConfigError("unknown method '" + method +
                                 "' (expected exhaustive, greedy, or auto)");
  }
  std::ostringstream line;
  for (std::size_t i = 0; i < ranking.order.size(); ++i) {
    if (i > 0) line << ' ';
    line << ranking.order[i].value;
  }
  std::cout << line.str() << std::endl;
  if (!out_path.empty()) {
    std::ostringstream file;
    for (const auto& doc : ranking.order) file << doc.value << '\n';
    write_text_file(out_path, file.str());
  }
  return 0;
}

int run_report(const std::string& log_path, const ConfigFlags& flags,
               const std::string& out_dir) {
  const auto config = resolve_config(flags);
  const auto log = fairpairs::read_log(log_path);
  const auto query = fairpairs::make_query(config, "q");
  const auto base = fairpairs::base_ranking(query);
  std::optional<fairpairs::DocumentId> probe_doc;
  if (config.probe.has_value()) {
    probe_doc = fairpairs::DocumentId{"probe"};
  }
  const auto table = fairpairs::build_report_table(log, base, probe_doc);
  const std::filesystem::path dir(out_dir);
  ensure_directory(dir);
  std::ostringstream csv;
  fairpairs::write_report_csv(table, csv);
  write_text_file(dir / "report.csv", csv.str());
  fairpairs::emit_report(table, dir);
  std::cout << "tallied " << log.size() << " impressions into " << out_dir
            << std::endl;
  return 0;
}

int run_verify(const std::vector<std::string>& only) {
  auto wanted = [&](const std::string& name) {
    return only.empty() ||
           std::find(only.begin(), only.end(), name) != only.end();
  };
  int failures = 0;
  int ran = 0;
  auto consider = [&](const char* name,
                      const std::function<fairpairs::CheckResult()>& check) {
    if (!wanted(name)) return;
    ++ran;
    const auto result = check();
    std::cout << (result.passed ? "[PASS] " : "[FAIL] ") << result.name
              << ": " << result.details << std::endl;
    if (!result.passed) ++failures;
  };
  consider("theorem1_unbiasedness",
           [] { return fairpairs::check_theorem1(); });
  consider("theorem2_convergence",
           [] { return fairpairs::check_theorem2(); });
  consider("assumption2_necessity",
           [] { return fairpairs::check_assumption2_necessity(); });
  consider("baseline_bias", [] { return fairpairs::check_bias_baselines(); });
  consider("displacement_and_symmetry",
           [] { return fairpairs::check_displacement_symmetry(); });
  consider("probe_experiment",
           [] { return fairpairs::check_probe_experiment(); });
  if (ran == 0) {
    throw fairpairs::ConfigError("no check matches the requested names");
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FairPairs presentation randomization and simulation harness"};
  app.require_subcommand(1);

  ConfigFlags sim_flags;
  std::string sim_out;
  bool sim_timestamps = false;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a simulated experiment and write its artifacts");
  add_config_flags(simulate, sim_flags);
  simulate->add_option("--out-dir", sim_out, "Output directory")->required();
  simulate->add_flag("--timestamps", sim_timestamps,
                     "Add write-time timestamps to the log");

  ConfigFlags probe_flags;
  std::string probe_out;
  bool probe_timestamps = false;
  auto* probe = app.add_subcommand(
      "probe", "Run the low-relevance probe experiment");
  add_config_flags(probe, probe_flags);
  probe->add_option("--out-dir", probe_out, "Output directory")->required();
  probe->add_flag("--timestamps", probe_timestamps,
                  "Add write-time timestamps to the log");

  std::string agg_log, agg_out;
  std::string agg_extractor = "fairpairs";
  auto* aggregate = app.add_subcommand(
      "aggregate", "Replay a click log into pair statistics");
  aggregate->add_option("--log", agg_log, "Click log (NDJSON)")->required();
  aggregate->add_option("--out", agg_out, "Output stats CSV")->required();
  aggregate->add_option("--extractor", agg_extractor,
                        "Vote extractor (fairpairs or skip_above)");

  std::string learn_stats, learn_out;
  std::string learn_method = "auto";
  auto* learn =
      app.add_subcommand("learn", "Derive a ranking from pair statistics");
  learn->add_option("--stats", learn_stats, "Stats CSV")->required();
  learn->add_option("--method", learn_method,
                    "exhaustive, greedy, or auto (default)");
  learn->add_option("--out", learn_out, "Optional output file, one id per line");

  std::string report_log, report_out;
  ConfigFlags report_flags;
  auto* report = app.add_subcommand(
      "report", "Tally a click log into per-pair report CSVs");
  report->add_option("--log", report_log, "Click log (NDJSON)")->required();
  add_config_flags(report, report_flags);
  report->add_option("--out-dir", report_out, "Output directory")->required();

  std::vector<std::string> verify_only;
  auto* verify = app.add_subcommand("verify", "Run the built-in checks");
  verify->add_option("--check", verify_only,
                     "Run only the named checks (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(sim_flags, sim_out, sim_timestamps);
    }
    if (probe->parsed()) {
      return run_probe(probe_flags, probe_out, probe_timestamps);
    }
    if (aggregate->parsed()) {
      return run_aggregate(agg_log, agg_out, agg_extractor);
    }
    if (learn->parsed()) {
      return run_learn(learn_stats, learn_method, learn_out);
    }
    if (report->parsed()) {
      return run_report(report_log, report_flags, report_out);
    }
    if (verify->parsed()) {
      return run_verify(verify_only);
    }
  } catch (const fairpairs::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
