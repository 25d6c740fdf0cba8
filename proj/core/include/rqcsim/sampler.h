#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "rqcsim/amplitude_engine.h"
#include "rqcsim/bits.h"
#include "rqcsim/rng.h"

namespace rqcsim {

// Probability that a batch of n_c Porter-Thomas amplitudes yields a sample
// under ceiling m: 1 - (1 - 1/m)^n_c.
double accept_probability(double m, std::uint64_t n_c);
// Batches needed for `target` samples in expectation, rounded up.
std::uint64_t required_batches(double m, std::uint64_t n_c, std::uint64_t target);

struct ProbabilityBatch {
  std::vector<Bits> strings;
  std::vector<double> probabilities;
};

struct SamplerConfig {
  double m = 10.0;
  std::size_t n_c = 32;
  std::uint64_t target_samples = 1000;
  std::uint64_t seed = 0;
  FidelitySpec fidelity;
  // Stop after this many batches even if short of the target; 0 means
  // required_batches times four.
  std::uint64_t max_batches = 0;
};

// Accepts at most one entry per batch: entries are visited in a shuffled
// order and each is kept with probability min(1, p N / M).
class FrugalSampler {
 public:
  FrugalSampler(double m, double hilbert_dim, std::uint64_t seed);
  std::optional<std::size_t> offer(std::span<const double> probabilities);
  std::uint64_t batches() const { return batches_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  double m_;
  double dim_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::uint64_t batches_ = 0;
  std::uint64_t accepted_ = 0;
};

std::vector<Bits> frugal_sample(const std::vector<ProbabilityBatch>& batches, double m, double hilbert_dim,
                                std::uint64_t seed);

struct SamplingErrorReport {
  double epsilon = 0;
  double m = 0;
  std::size_t count = 0;
  double tail_mass = 0;  // sum of p above M/N
};

// epsilon = (sum of p_i > M/N) * N / count.
SamplingErrorReport estimate_sampling_error(std::span<const double> probabilities, double m, double hilbert_dim);

// Supplies probability batches for random AB strings. Full C tables are
// computed once per AB string and kept, so repeated strings cost nothing.
class EngineBatchSource {
 public:
  EngineBatchSource(const AmplitudeEngine& engine, FidelitySpec spec, std::size_t max_memo_entries = 1u << 22);
  // probabilities are normalized by the target fidelity for path fractions.
  ProbabilityBatch next(Rng& rng, std::size_t n_c);
  std::size_t memo_size() const;

 private:
  const std::vector<double>& table(std::uint64_t ab_index);
  const AmplitudeEngine& engine_;
  FidelitySpec spec_;
  std::size_t max_memo_entries_;
  std::size_t c_bits_;
  std::size_t ab_bits_;
  mutable std::mutex mu_;
  std::map<std::uint64_t, std::vector<double>> memo_;
  std::size_t memo_entries_ = 0;
};

struct SampleRun {
  std::vector<Bits> samples;
  std::uint64_t batches_used = 0;
  std::uint64_t exact_requests = 0;
  std::uint64_t uniform_requests = 0;
  double acceptance_rate = 0;
  double epsilon_estimate = 0;
  bool complete = false;
};

// End-to-end fast sampling. In mixed mode each request is uniform with
// probability 1 - f and otherwise drawn by frugal sampling.
SampleRun sample_circuit(const AmplitudeEngine& engine, const SamplerConfig& config);

struct ChiSquaredResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 0;
  std::size_t bins = 0;
};

// Goodness of fit of counts against probabilities; cells with expected
// count below min_expected are pooled into one.
ChiSquaredResult chi_squared_test(std::span<const std::uint64_t> counts, std::span<const double> probabilities,
                                  double min_expected = 5.0);

}  // namespace rqcsim
