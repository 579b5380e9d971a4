// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
//
// Microbenchmarks for the per-impression hot path and the heavier offline
// steps. Run with --benchmark_min_time=... to tighten timings.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <sstream>

#include "fairpairs/click_model.hpp"
#include "fairpairs/config.hpp"
#include "fairpairs/learner.hpp"
#include "fairpairs/log_io.hpp"
#include "fairpairs/pair_stats.hpp"
#include "fairpairs/perturbation.hpp"
#include "fairpairs/simulation.hpp"
#include "fairpairs/statistics.hpp"

namespace {

using namespace fairpairs;

ExperimentConfig bench_config(int num_docs) {
  ExperimentConfig config;
  config.num_docs = num_docs;
  config.relevances = relevance_preset("linear", num_docs);
  return config;
}

void BM_DrawAndApplyFlipPlan(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  const auto base = base_ranking(make_query(config, "q"));
  RngStream rng(42);
  for (auto _ : state) {
    const auto plan = draw_flip_plan(base.size(), rng);
    benchmark::DoNotOptimize(apply_flip_plan(base, plan));
  }
}
BENCHMARK(BM_DrawAndApplyFlipPlan)->Arg(6)->Arg(10);

void BM_SimulateImpression(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  const auto query = make_query(config, "q");
  const auto ctx = detail::make_context(query, default_model());
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(detail::simulate_impression(ctx, 7, index++));
  }
}
BENCHMARK(BM_SimulateImpression)->Arg(6)->Arg(10);

void BM_RecordVotes(benchmark::State& state) {
  const auto config = bench_config(6);
  const auto query = make_query(config, "q");
  const auto ctx = detail::make_context(query, default_model());
  const auto record = detail::simulate_impression(ctx, 7, 3);
  PairStats stats;
  for (auto _ : state) {
    record_votes(stats, record);
  }
}
BENCHMARK(BM_RecordVotes);

void BM_LogRoundTrip(benchmark::State& state) {
  const auto config = bench_config(6);
  const auto query = make_query(config, "q");
  const auto ctx = detail::make_context(query, default_model());
  const auto record = detail::simulate_impression(ctx, 7, 3);
  const auto line = to_log_line(record);
  for (auto _ : state) {
    benchmark::DoNotOptimize(from_log_line(line));
  }
}
BENCHMARK(BM_LogRoundTrip);

void BM_WilsonInterval(benchmark::State& state) {
  std::uint64_t c = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wilson_interval(c % 1000, 1000, 0.95));
    ++c;
  }
}
BENCHMARK(BM_WilsonInterval);

void BM_FisherExact(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher_exact(n, n / 3, n / 3, n));
  }
}
BENCHMARK(BM_FisherExact)->Arg(10)->Arg(30)->Arg(100);

void BM_MinimizeExhaustive(benchmark::State& state) {
  const int num_docs = static_cast<int>(state.range(0));
  auto config = bench_config(num_docs);
  config.num_queries = 2000;
  config.seed = 11;
  const auto sim = run_simulation(config);
  const auto docs = base_ranking(sim.query).order;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_error_exhaustive(sim.fairpairs, docs));
  }
}
BENCHMARK(BM_MinimizeExhaustive)->Arg(6)->Arg(8);

void BM_MinimizeGreedy(benchmark::State& state) {
  auto config = bench_config(10);
  config.num_queries = 2000;
  config.seed = 11;
  const auto sim = run_simulation(config);
  const auto docs = base_ranking(sim.query).order;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_error_greedy(sim.fairpairs, docs));
  }
}
BENCHMARK(BM_MinimizeGreedy);

}  // namespace

BENCHMARK_MAIN();
