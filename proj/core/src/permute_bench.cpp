#include "rqcsim/permute_bench.h"

#include <algorithm>
#include <chrono>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rqcsim/permute.h"
#include "rqcsim/rng.h"
#include "rqcsim/thread_pool.h"

namespace rqcsim {
namespace {

template <class F>
PermuteTiming time_op(const std::string& op, int rank, int gamma, int threads, int reps, F&& fn) {
  std::vector<double> ns;
  fn();  // warm-up; also fills the move-map cache
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  std::sort(ns.begin(), ns.end());
  auto pick = [&](double q) { return ns[static_cast<std::size_t>(q * (ns.size() - 1) + 0.5)]; };
  return {op, rank, gamma, threads, pick(0.5), pick(0.1), pick(0.9)};
}

std::vector<int> random_perm(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p);
  return p;
}

}  // namespace

std::vector<PermuteTiming> benchmark_permute(const PermuteBenchConfig& config) {
  if (config.rank < 2 || config.rank > 30) throw std::invalid_argument("bench rank must be in [2, 30]");
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be positive");
  Rng rng(config.seed);
  const std::size_t size = std::size_t{1} << config.rank;
  std::vector<cfloat> data(size), out(size);
  for (auto& x : data) x = cfloat(static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()));
  std::vector<std::string> labels;
  for (int i = 0; i < config.rank; ++i) labels.push_back("i" + std::to_string(i));
  Tensor<cfloat> t(labels, std::vector<std::size_t>(config.rank, 2), data);

  std::vector<PermuteTiming> rows;
  std::vector<int> full = random_perm(config.rank, rng);
  for (int threads : config.threads) {
    auto pool = std::make_unique<ThreadPool>(static_cast<std::size_t>(std::max(1, threads)));
    PermuteOptions opts{pool.get(), &MoveMapCache::global()};
    rows.push_back(time_op("naive", config.rank, 0, threads, config.repetitions, [&] { (void)permute_naive(t, full); }));
    for (int gamma : config.gammas) {
      if (gamma < 1 || gamma > config.rank) continue;
      Move r{MoveKind::right, gamma, random_perm(gamma, rng)};
      rows.push_back(time_op("R", config.rank, gamma, threads, config.repetitions,
                             [&] { apply_move(data.data(), out.data(), config.rank, r, opts); }));
      if (gamma < config.rank) {
        Move l{MoveKind::left, gamma, random_perm(config.rank - gamma, rng)};
        rows.push_back(time_op("L", config.rank, gamma, threads, config.repetitions,
                               [&] { apply_move(data.data(), out.data(), config.rank, l, opts); }));
      }
    }
  }
  return rows;
}

std::string permute_timings_csv(const std::vector<PermuteTiming>& rows) {
  std::ostringstream out;
  out << "op,rank,gamma,threads,median_ns,p10_ns,p90_ns\n";
  for (const auto& r : rows)
    out << r.op << ',' << r.rank << ',' << r.gamma << ',' << r.threads << ',' << static_cast<long long>(r.median_ns)
        << ',' << static_cast<long long>(r.p10_ns) << ',' << static_cast<long long>(r.p90_ns) << '\n';
  return out.str();
}

}  // namespace rqcsim
