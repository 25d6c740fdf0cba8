#include "rqcsim/rng.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace rqcsim {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Rejection on the top of the range keeps every residue equally likely.
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

double Rng::exponential() { return -std::log1p(-uniform()); }

std::vector<std::uint64_t> Rng::distinct(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("Rng::distinct: k exceeds range");
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (k * 2 >= n) {
    // Dense case: partial Fisher-Yates over the whole range.
    std::vector<std::uint64_t> all(n);
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
      std::uint64_t j = i + below(n - i);
      std::swap(all[i], all[j]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < k) {
    std::uint64_t x = below(n);
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rqcsim
