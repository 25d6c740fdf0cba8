#include <benchmark/benchmark.h>

#include "rqcsim/amplitude_engine.h"
#include "rqcsim/builtin_plans.h"
#include "rqcsim/generator.h"

using namespace rqcsim;

namespace {

// Marginal cost of a batch: one amplitude against N_C amplitudes that share
// their AB bits, on Bristlecone-24.
struct Fixture {
  Circuit circuit = generate_rqc(Lattice::bristlecone(24), DepthSpec{24}, 5);
  AmplitudeEngine engine{circuit, builtin_plan(circuit), Bits(24, 0)};
  Bits s_ab = Bits(engine.ab_positions().size(), 0);
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_SingleAmplitude(benchmark::State& state) {
  auto& f = fixture();
  const auto s_c = random_suffixes(f.engine.c_positions().size(), 1, 9);
  for (auto _ : state) benchmark::DoNotOptimize(f.engine.amplitude_batch(f.s_ab, s_c));
}

void BM_Batch(benchmark::State& state) {
  auto& f = fixture();
  const auto s_c = random_suffixes(f.engine.c_positions().size(), static_cast<std::size_t>(state.range(0)), 9);
  for (auto _ : state) benchmark::DoNotOptimize(f.engine.amplitude_batch(f.s_ab, s_c));
}

}  // namespace

BENCHMARK(BM_SingleAmplitude)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Batch)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
