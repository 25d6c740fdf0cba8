#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rqcsim {

// Seedable 64-bit generator with platform-independent derived draws.
// The std distributions are implementation-defined, so every helper here
// is written out explicitly to keep instances reproducible everywhere.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  bool coin() { return (engine_() >> 63) != 0; }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [0, n), unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Exp(1) variate.
  double exponential();

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, n), in selection order.
  std::vector<std::uint64_t> distinct(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

// Stable derivation of independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rqcsim
