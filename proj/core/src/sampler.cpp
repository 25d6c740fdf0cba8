#include "rqcsim/sampler.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rqcsim {

double accept_probability(double m, std::uint64_t n_c) {
  if (!(m >= 1.0) || n_c == 0) throw std::invalid_argument("accept_probability needs M >= 1 and N_C >= 1");
  return 1.0 - std::pow(1.0 - 1.0 / m, static_cast<double>(n_c));
}

std::uint64_t required_batches(double m, std::uint64_t n_c, std::uint64_t target) {
  if (target == 0) throw std::invalid_argument("target must be positive");
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(target) / accept_probability(m, n_c)));
}

FrugalSampler::FrugalSampler(double m, double hilbert_dim, std::uint64_t seed) : m_(m), dim_(hilbert_dim), rng_(seed) {
  if (!(m >= 1.0)) throw std::invalid_argument("M must be at least 1");
  if (!(hilbert_dim > 0)) throw std::invalid_argument("Hilbert dimension must be positive");
}

std::optional<std::size_t> FrugalSampler::offer(std::span<const double> probabilities) {
  for (double p : probabilities)
    if (!std::isfinite(p) || p < 0) throw std::invalid_argument("batch has a non-finite or negative probability");
  ++batches_;
  order_.resize(probabilities.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  rng_.shuffle(order_);
  for (std::size_t i : order_) {
    const double keep = std::min(1.0, probabilities[i] * dim_ / m_);
    // Always draw, so the stream does not depend on clamping.
    const double u = rng_.uniform();
    if (u < keep) {
      ++accepted_;
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Bits> frugal_sample(const std::vector<ProbabilityBatch>& batches, double m, double hilbert_dim,
                                std::uint64_t seed) {
  FrugalSampler sampler(m, hilbert_dim, seed);
  std::vector<Bits> out;
  for (const auto& b : batches) {
    if (b.strings.size() != b.probabilities.size()) throw std::invalid_argument("batch strings/probabilities mismatch");
    if (auto i = sampler.offer(b.probabilities)) out.push_back(b.strings[*i]);
  }
  return out;
}

SamplingErrorReport estimate_sampling_error(std::span<const double> probabilities, double m, double hilbert_dim) {
  if (probabilities.empty()) throw std::invalid_argument("no probabilities");
  SamplingErrorReport r;
  r.m = m;
  r.count = probabilities.size();
  const double threshold = m / hilbert_dim;
  for (double p : probabilities)
    if (p > threshold) r.tail_mass += p;
  r.epsilon = r.tail_mass * hilbert_dim / static_cast<double>(r.count);
  return r;
}

EngineBatchSource::EngineBatchSource(const AmplitudeEngine& engine, FidelitySpec spec, std::size_t max_memo_entries)
    : engine_(engine), spec_(spec), max_memo_entries_(max_memo_entries) {
  if (spec_.mode == FidelityMode::mixed) spec_ = FidelitySpec::exact();
  spec_.validate();
  c_bits_ = engine.c_positions().size();
  ab_bits_ = engine.ab_positions().size();
  if (c_bits_ > 20) throw std::invalid_argument("C region too large for full tables");
  if (ab_bits_ >= 64) throw std::invalid_argument("AB region too large");
}

std::size_t EngineBatchSource::memo_size() const {
  std::lock_guard lock(mu_);
  return memo_.size();
}

const std::vector<double>& EngineBatchSource::table(std::uint64_t ab_index) {
  {
    std::lock_guard lock(mu_);
    auto it = memo_.find(ab_index);
    if (it != memo_.end()) return it->second;
  }
  const std::size_t space = std::size_t{1} << c_bits_;
  std::vector<Bits> all;
  for (std::size_t i = 0; i < space; ++i) all.push_back(bits_from_index(i, c_bits_));
  AmplitudeBatch b = engine_.amplitude_batch(bits_from_index(ab_index, ab_bits_), all, spec_);
  const double scale = spec_.mode == FidelityMode::path_fraction ? 1.0 / spec_.f : 1.0;
  for (double& p : b.probabilities) p *= scale;
  std::lock_guard lock(mu_);
  if (memo_entries_ + space > max_memo_entries_) {
    memo_.clear();
    memo_entries_ = 0;
  }
  memo_entries_ += space;
  return memo_.emplace(ab_index, std::move(b.probabilities)).first->second;
}

ProbabilityBatch EngineBatchSource::next(Rng& rng, std::size_t n_c) {
  const std::uint64_t ab_index = ab_bits_ == 0 ? 0 : rng.below(std::uint64_t{1} << ab_bits_);
  const Bits s_ab = bits_from_index(ab_index, ab_bits_);
  const std::uint64_t space = std::uint64_t{1} << c_bits_;
  if (n_c == 0 || n_c > space) throw std::invalid_argument("batch size must be in [1, 2^|C|]");
  const auto picks = rng.distinct(space, n_c);
  const auto& tab = table(ab_index);
  ProbabilityBatch out;
  for (auto c : picks) {
    out.strings.push_back(engine_.join(s_ab, bits_from_index(c, c_bits_)));
    out.probabilities.push_back(tab[c]);
  }
  return out;
}

SampleRun sample_circuit(const AmplitudeEngine& engine, const SamplerConfig& config) {
  config.fidelity.validate();
  const std::size_t n = engine.num_qubits();
  const double dim = std::ldexp(1.0, static_cast<int>(n));
  EngineBatchSource source(engine, config.fidelity);
  Rng batch_rng(mix_seed(config.seed, 1));
  FrugalSampler sampler(config.m, dim, mix_seed(config.seed, 2));
  const bool mixed = config.fidelity.mode == FidelityMode::mixed;
  MixedStateSource mix(mixed ? config.fidelity.f : 1.0, mix_seed(config.seed, 3));

  std::uint64_t exact_target = config.target_samples;
  std::vector<bool> exact_slot(config.target_samples, true);
  SampleRun run;
  if (mixed) {
    exact_target = 0;
    for (std::size_t i = 0; i < exact_slot.size(); ++i) {
      exact_slot[i] = mix.exact_branch();
      exact_target += exact_slot[i];
    }
  }
  const std::uint64_t limit =
      config.max_batches ? config.max_batches
                         : (exact_target ? 4 * required_batches(config.m, config.n_c, exact_target) : 0);

  std::vector<double> seen;
  std::vector<Bits> exact;
  while (exact.size() < exact_target && sampler.batches() < limit) {
    ProbabilityBatch b = source.next(batch_rng, config.n_c);
    seen.insert(seen.end(), b.probabilities.begin(), b.probabilities.end());
    if (auto i = sampler.offer(b.probabilities)) exact.push_back(std::move(b.strings[*i]));
  }
  std::size_t next_exact = 0;
  for (std::size_t i = 0; i < exact_slot.size(); ++i) {
    if (exact_slot[i]) {
      if (next_exact >= exact.size()) break;
      run.samples.push_back(exact[next_exact++]);
      ++run.exact_requests;
    } else {
      run.samples.push_back(mix.uniform_bits(n));
      ++run.uniform_requests;
    }
  }
  run.batches_used = sampler.batches();
  run.acceptance_rate = run.batches_used ? static_cast<double>(sampler.accepted()) / run.batches_used : 0.0;
  if (!seen.empty()) run.epsilon_estimate = estimate_sampling_error(seen, config.m, dim).epsilon;
  run.complete = run.samples.size() == config.target_samples;
  return run;
}

ChiSquaredResult chi_squared_test(std::span<const std::uint64_t> counts, std::span<const double> probabilities,
                                  double min_expected) {
  if (counts.size() != probabilities.size()) throw std::invalid_argument("counts/probabilities size mismatch");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (total <= 0) throw std::invalid_argument("no samples");
  ChiSquaredResult r;
  double pooled_e = 0, pooled_o = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = probabilities[i] * total;
    const double o = static_cast<double>(counts[i]);
    if (e < min_expected) {
      pooled_e += e;
      pooled_o += o;
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
    ++r.bins;
  }
  if (pooled_e > 0) {
    r.statistic += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++r.bins;
  } else if (pooled_o > 0) {
    throw std::invalid_argument("samples observed where the probability is zero");
  }
  r.dof = static_cast<double>(r.bins) - 1.0;
  if (r.dof < 1) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace rqcsim
