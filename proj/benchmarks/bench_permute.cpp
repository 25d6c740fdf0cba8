#include <benchmark/benchmark.h>

#include <numeric>

#include "rqcsim/permute.h"
#include "rqcsim/rng.h"

using namespace rqcsim;

namespace {

constexpr int kRank = 22;

Tensor<cfloat> random_tensor(int rank) {
  std::vector<std::string> labels;
  for (int i = 0; i < rank; ++i) labels.push_back("i" + std::to_string(i));
  Tensor<cfloat> t(labels, std::vector<std::size_t>(rank, 2));
  Rng rng(1);
  for (auto& x : t.data()) x = cfloat(static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()));
  return t;
}

std::vector<int> random_perm(int n, std::uint64_t seed) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Rng rng(seed);
  rng.shuffle(p);
  return p;
}

void BM_PermuteNaive(benchmark::State& state) {
  auto t = random_tensor(kRank);
  auto perm = random_perm(kRank, 2);
  for (auto _ : state) benchmark::DoNotOptimize(permute_naive(t, perm));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.size() * sizeof(cfloat)));
}

void BM_PermuteFast(benchmark::State& state) {
  auto t = random_tensor(kRank);
  auto plan = plan_permutation(t.dims(), random_perm(kRank, 2));
  for (auto _ : state) benchmark::DoNotOptimize(permute_fast(t, plan));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.size() * sizeof(cfloat)));
}

void BM_Move(benchmark::State& state, MoveKind kind) {
  const int gamma = static_cast<int>(state.range(0));
  auto t = random_tensor(kRank);
  std::vector<cfloat> out(t.size());
  // R permutes the gamma trailing indexes inside each block; L keeps them
  // fixed and permutes the rest.
  Move m{kind, gamma, random_perm(kind == MoveKind::right ? gamma : kRank - gamma, 3)};
  for (auto _ : state) {
    apply_move(t.data().data(), out.data(), kRank, m);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.size() * sizeof(cfloat)));
}

void BM_MoveL(benchmark::State& state) { BM_Move(state, MoveKind::left); }
void BM_MoveR(benchmark::State& state) { BM_Move(state, MoveKind::right); }

}  // namespace

BENCHMARK(BM_PermuteNaive)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermuteFast)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MoveL)->DenseRange(5, 10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MoveR)->DenseRange(5, 10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
