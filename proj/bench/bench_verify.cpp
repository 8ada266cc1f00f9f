// Serial reference vs OpenMP driver on the same batch. Reports are identical
// (see the determinism test); only wall time differs.
#include <benchmark/benchmark.h>

#include "relext/verify.hpp"

namespace {

void run(benchmark::State& state, relext::Execution exec) {
  relext::BatchConfig cfg;
  cfg.count = state.range(0);
  cfg.seed = 1;
  for (auto _ : state) {
    const relext::BatchReport rep = relext::verify_batch(cfg, exec);
    if (!rep.all_passed()) state.SkipWithError("batch has failures");
    benchmark::DoNotOptimize(rep.results.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VerifySerial(benchmark::State& s) { run(s, relext::Execution::serial); }
void BM_VerifyParallel(benchmark::State& s) { run(s, relext::Execution::parallel); }

}  // namespace

BENCHMARK(BM_VerifySerial)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyParallel)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
