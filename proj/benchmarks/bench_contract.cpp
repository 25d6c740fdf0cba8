#include <benchmark/benchmark.h>

#include "rqcsim/contract.h"
#include "rqcsim/rng.h"

using namespace rqcsim;

namespace {

Tensor<cfloat> random_tensor(const std::vector<std::string>& labels, std::uint64_t seed) {
  Tensor<cfloat> t(labels, std::vector<std::size_t>(labels.size(), 2));
  Rng rng(seed);
  for (auto& x : t.data()) x = cfloat(static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()));
  return t;
}

std::vector<std::string> names(const std::string& p, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(p + std::to_string(i));
  return out;
}

// Two rank-2k tensors sharing k binary indexes, the shared ones placed
// first in b so a permute is needed.
void BM_Contract(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto backend = static_cast<GemmBackend>(state.range(1));
  if (backend == GemmBackend::blas && !blas_available()) {
    state.SkipWithError("no BLAS backend");
    return;
  }
  auto shared = names("s", k);
  auto fa = names("a", k), fb = names("b", k);
  std::vector<std::string> la = fa, lb = shared;
  la.insert(la.end(), shared.begin(), shared.end());
  lb.insert(lb.end(), fb.begin(), fb.end());
  auto a = random_tensor(la, 1), b = random_tensor(lb, 2);
  ContractOptions opts;
  opts.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(contract(a, b, opts));
  state.counters["flops"] = benchmark::Counter(8.0 * std::ldexp(1.0, 3 * k) * static_cast<double>(state.iterations()),
                                               benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_Contract)
    ->ArgsProduct({{6, 8, 10}, {static_cast<int>(GemmBackend::blocked), static_cast<int>(GemmBackend::blas)}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
