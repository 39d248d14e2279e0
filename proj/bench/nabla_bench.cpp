// Serial reference vs OpenMP versions of the two sampling loops.

#include <benchmark/benchmark.h>

#include "nabla/fuzz.hpp"
#include "nabla/judgment.hpp"
#include "nabla/semantics.hpp"

using namespace nabla;

namespace {

// A valid consequence, so every sample is evaluated and none stops early.
struct Consequence {
  std::vector<Generic> premises;
  Generic conclusion;
};

Consequence histe_instance() {
  Lwff major{{Label{"b"}, Label{"c"}}, parse_h("(H (G (p -> (X q))))")};
  Lwff concl{{Label{"b"}, Label{"d"}}, parse_h("(G (p -> (X q)))")};
  return {{major, le(Label{"b"}, Label{"d"}), le(Label{"d"}, Label{"c"})}, concl};
}

void BM_FalsifySerial(benchmark::State& st) {
  Consequence c = histe_instance();
  for (auto _ : st)
    benchmark::DoNotOptimize(falsify_consequence_serial(c.premises, c.conclusion, st.range(0), 1));
}

void BM_FalsifyParallel(benchmark::State& st) {
  Consequence c = histe_instance();
  for (auto _ : st)
    benchmark::DoNotOptimize(falsify_consequence(c.premises, c.conclusion, st.range(0), 1));
}

void fuzz_bench(benchmark::State& st, Lemma lemma, bool parallel) {
  FuzzOptions o;
  o.lemma = lemma;
  o.samples = st.range(0);
  o.parallel = parallel;
  for (auto _ : st) benchmark::DoNotOptimize(run_fuzz(o));
}

void BM_FuzzTranslationSerial(benchmark::State& st) { fuzz_bench(st, Lemma::Translation, false); }
void BM_FuzzTranslationParallel(benchmark::State& st) { fuzz_bench(st, Lemma::Translation, true); }
void BM_FuzzBoundSerial(benchmark::State& st) { fuzz_bench(st, Lemma::QuantifierBound, false); }
void BM_FuzzBoundParallel(benchmark::State& st) { fuzz_bench(st, Lemma::QuantifierBound, true); }

}  // namespace

BENCHMARK(BM_FalsifySerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FalsifyParallel)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FuzzTranslationSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuzzTranslationParallel)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FuzzBoundSerial)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuzzBoundParallel)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
