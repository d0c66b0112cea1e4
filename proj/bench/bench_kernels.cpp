// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors
//
// Serial against OpenMP h_P kernels, plus the reduction steps of one trial.
// MERTENS_ZEROS selects the table; the bundled 50-zero fixture is the default.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <filesystem>

#include "mertens/evaluator.hpp"
#include "mertens/mertens_lattice.hpp"
#include "mertens/reduction.hpp"

using namespace mertens;

namespace {

const ZeroTable& table() {
  static const ZeroTable t = [] {
    const char* env = std::getenv("MERTENS_ZEROS");
    const std::filesystem::path p =
        env ? std::filesystem::path(env) : std::filesystem::path(MERTENS_SOURCE_DIR) / "tests/data/zeros_first50.txt";
    return parse_table(p);
  }();
  return t;
}

const Dyadic kY = Dyadic::parse("101725620875699458168018857216.806640625");

void hp_kernel(benchmark::State& state, bool parallel) {
  EvalOptions o;
  o.require_coverage = false;
  o.parallel = parallel;
  const HpEvaluator ev(table(), PrecisionContext(static_cast<unsigned>(state.range(0))), o);
  for (auto _ : state) benchmark::DoNotOptimize(ev(kY));
  state.counters["terms"] = static_cast<double>(ev.term_count());
}

void BM_HpSerial(benchmark::State& state) { hp_kernel(state, false); }
void BM_HpParallel(benchmark::State& state) { hp_kernel(state, true); }

BENCHMARK(BM_HpSerial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HpParallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LllEmbedding(benchmark::State& state) {
  const BuildParams p{static_cast<int>(state.range(0)), 40};
  const ZeroTable by_alpha = order_by_alpha(table());
  const LatticeBasis b = build_basis(by_alpha, p, PrecisionContext(1024));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lll(randomize_unimodular(b, seed++), ReductionParams{}));
}
BENCHMARK(BM_LllEmbedding)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_BkzEmbedding(benchmark::State& state) {
  const BuildParams p{static_cast<int>(state.range(0)), 40};
  const ZeroTable by_alpha = order_by_alpha(table());
  const LatticeBasis b = build_basis(by_alpha, p, PrecisionContext(1024));
  ReductionParams rp;
  rp.beta = 10;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bkz(randomize_unimodular(b, seed++), rp));
}
BENCHMARK(BM_BkzEmbedding)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
