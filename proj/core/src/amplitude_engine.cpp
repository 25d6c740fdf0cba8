#include "rqcsim/amplitude_engine.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rqcsim/network.h"

namespace rqcsim {

const char* fidelity_mode_name(FidelityMode mode) {
  switch (mode) {
    case FidelityMode::exact: return "exact";
    case FidelityMode::path_fraction: return "path-fraction";
    case FidelityMode::mixed: return "mixed";
  }
  return "?";
}

void FidelitySpec::validate() const {
  if (!std::isfinite(f)) throw std::invalid_argument("fidelity must be finite");
  switch (mode) {
    case FidelityMode::exact:
      if (f != 1.0) throw std::invalid_argument("exact mode requires f = 1");
      break;
    case FidelityMode::path_fraction:
      if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("path fraction f must be in (0, 1]");
      break;
    case FidelityMode::mixed:
      if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("mixed-state f must be in [0, 1]");
      break;
  }
}

struct AmplitudeEngine::Impl {
  virtual ~Impl() = default;
  virtual const ContractionPlan& plan() const = 0;
  virtual const CostEstimate& cost() const = 0;
  virtual std::uint64_t total_paths() const = 0;
  virtual std::vector<Path> paths(double f, std::uint64_t seed) const = 0;
  // [output][path] contributions.
  virtual std::vector<std::vector<cdouble>> run(const std::vector<Path>& paths,
                                                const std::vector<OutputPattern>& outs) const = 0;
};

template <class T>
struct AmplitudeEngine::ImplT final : AmplitudeEngine::Impl {
  GridNetwork2D<T> net;
  PlanExecutor<T> exec;

  ImplT(const Circuit& c, const Bits& in, ContractionPlan plan, const ExecOptions& opts)
      : net(build_2d<T>(c, in, opts.contract)), exec(net, std::move(plan), opts) {}

  const ContractionPlan& plan() const override { return exec.plan(); }
  const CostEstimate& cost() const override { return exec.cost(); }
  std::uint64_t total_paths() const override { return exec.total_paths(); }
  std::vector<Path> paths(double f, std::uint64_t seed) const override { return exec.paths(f, seed); }
  std::vector<std::vector<cdouble>> run(const std::vector<Path>& paths,
                                        const std::vector<OutputPattern>& outs) const override {
    auto parts = exec.contributions(paths, outs);
    std::vector<std::vector<cdouble>> out(parts.size());
    for (std::size_t o = 0; o < parts.size(); ++o) {
      out[o].reserve(parts[o].size());
      for (const auto& t : parts[o]) {
        if (t.size() != 1) throw std::logic_error("plan result is not a scalar");
        out[o].push_back(cdouble(t.data()[0]));
      }
    }
    return out;
  }
};

AmplitudeEngine::AmplitudeEngine(const Circuit& circuit, ContractionPlan plan, const Bits& in, EngineOptions options)
    : circuit_(circuit), in_(in), options_(options) {
  if (in.size() != circuit.num_qubits()) throw std::invalid_argument("input bit-string length mismatch");
  if (options_.double_precision)
    impl_ = std::make_unique<ImplT<cdouble>>(circuit_, in_, std::move(plan), options_.exec);
  else
    impl_ = std::make_unique<ImplT<cfloat>>(circuit_, in_, std::move(plan), options_.exec);
  const Lattice& lat = circuit_.lattice();
  c_sites_ = impl_->plan().batch_sites;
  std::sort(c_sites_.begin(), c_sites_.end());
  for (int s : c_sites_) c_positions_.push_back(lat.position(s));
  for (int p = 0; p < static_cast<int>(lat.size()); ++p)
    if (!std::binary_search(c_positions_.begin(), c_positions_.end(), p)) ab_positions_.push_back(p);
}

AmplitudeEngine::~AmplitudeEngine() = default;
AmplitudeEngine::AmplitudeEngine(AmplitudeEngine&&) noexcept = default;
AmplitudeEngine& AmplitudeEngine::operator=(AmplitudeEngine&&) noexcept = default;

const ContractionPlan& AmplitudeEngine::plan() const { return impl_->plan(); }
const CostEstimate& AmplitudeEngine::cost() const { return impl_->cost(); }
std::uint64_t AmplitudeEngine::total_paths() const { return impl_->total_paths(); }

std::vector<Path> AmplitudeEngine::select_paths(const FidelitySpec& spec) const {
  spec.validate();
  if (spec.mode == FidelityMode::path_fraction) return impl_->paths(spec.f, spec.seed);
  return impl_->paths(1.0, 0);
}

Bits AmplitudeEngine::join(const Bits& s_ab, const Bits& s_c) const {
  if (s_ab.size() != ab_positions_.size() || s_c.size() != c_positions_.size())
    throw std::invalid_argument("bit-string lengths do not match the AB/C split");
  Bits out(num_qubits());
  for (std::size_t i = 0; i < s_ab.size(); ++i) out[ab_positions_[i]] = s_ab[i];
  for (std::size_t i = 0; i < s_c.size(); ++i) out[c_positions_[i]] = s_c[i];
  return out;
}

std::vector<std::vector<cdouble>> AmplitudeEngine::run(const std::vector<Path>& paths,
                                                       const std::vector<Bits>& outs) const {
  std::vector<OutputPattern> patterns;
  for (const auto& o : outs) {
    if (o.size() != num_qubits()) throw std::invalid_argument("output bit-string length mismatch");
    patterns.push_back(fixed_output(o));
  }
  return impl_->run(paths, patterns);
}

PathStats AmplitudeEngine::stats_for(const std::vector<Path>& paths, const FidelitySpec& spec,
                                     const std::vector<std::vector<cdouble>>& parts) const {
  PathStats st;
  st.total_paths = total_paths();
  st.paths_used = paths.size();
  st.f_target = spec.mode == FidelityMode::path_fraction ? spec.f : 1.0;
  const double dim = std::ldexp(1.0, static_cast<int>(num_qubits()));
  st.path_norms.assign(paths.size(), 0.0);
  double total = 0;
  for (const auto& per_out : parts) {
    cdouble sum = 0;
    for (std::size_t p = 0; p < per_out.size(); ++p) {
      st.path_norms[p] += std::norm(per_out[p]);
      sum += per_out[p];
    }
    total += std::norm(sum);
  }
  const double scale = parts.empty() ? 0.0 : dim / static_cast<double>(parts.size());
  for (double& v : st.path_norms) v *= scale;
  st.f_achieved_estimate = total * scale;
  return st;
}

std::vector<AmplitudeResult> AmplitudeEngine::amplitudes(const std::vector<Bits>& outs,
                                                         const FidelitySpec& spec) const {
  const auto paths = select_paths(spec);
  const auto parts = run(paths, outs);
  std::vector<AmplitudeResult> results;
  for (std::size_t o = 0; o < outs.size(); ++o) {
    AmplitudeResult r;
    r.out = outs[o];
    r.value = 0;
    for (const auto& c : parts[o]) r.value += c;
    r.stats = stats_for(paths, spec, {parts[o]});
    results.push_back(std::move(r));
  }
  return results;
}

AmplitudeResult AmplitudeEngine::amplitude(const Bits& out, const FidelitySpec& spec) const {
  return std::move(amplitudes({out}, spec).front());
}

std::vector<cdouble> AmplitudeEngine::path_contributions(const Bits& out, const std::vector<Path>& paths) const {
  return run(paths, {out}).front();
}

void AmplitudeEngine::check_c_region(const std::vector<int>& sites) const {
  std::vector<int> s = sites;
  std::sort(s.begin(), s.end());
  if (s != c_sites_) throw std::invalid_argument("C region does not match the plan's batch sites");
}

AmplitudeBatch AmplitudeEngine::amplitude_batch(const Bits& s_ab, const std::vector<Bits>& s_c,
                                                const FidelitySpec& spec) const {
  if (s_c.empty()) throw std::invalid_argument("empty batch");
  const std::size_t c_bits = c_positions_.size();
  if (c_bits < 64 && s_c.size() > (std::uint64_t{1} << c_bits))
    throw std::invalid_argument("batch size exceeds 2^|C|");
  std::vector<Bits> outs;
  for (const auto& c : s_c) outs.push_back(join(s_ab, c));
  {
    auto sorted = outs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("batch suffixes must be distinct");
  }
  const auto paths = select_paths(spec);
  const auto parts = run(paths, outs);
  AmplitudeBatch batch;
  batch.s_ab = s_ab;
  batch.c_sites = c_sites_;
  batch.s_c = s_c;
  for (const auto& per_out : parts) {
    cdouble v = 0;
    for (const auto& c : per_out) v += c;
    batch.amplitudes.push_back(v);
    batch.probabilities.push_back(std::norm(v));
  }
  batch.stats = stats_for(paths, spec, parts);
  return batch;
}

AmplitudeBatch AmplitudeEngine::amplitude_batch(const Bits& s_ab, std::size_t n_c, std::uint64_t seed,
                                                const FidelitySpec& spec) const {
  return amplitude_batch(s_ab, random_suffixes(c_positions_.size(), n_c, seed), spec);
}

std::vector<Bits> random_suffixes(std::size_t bits, std::size_t n_c, std::uint64_t seed) {
  if (bits >= 64) throw std::invalid_argument("C region too large");
  const std::uint64_t space = std::uint64_t{1} << bits;
  if (n_c == 0 || n_c > space) throw std::invalid_argument("batch size must be in [1, 2^|C|]");
  Rng rng(seed);
  std::vector<Bits> out;
  for (auto v : rng.distinct(space, n_c)) out.push_back(bits_from_index(v, bits));
  return out;
}

MixedStateSource::MixedStateSource(double f, std::uint64_t seed) : f_(f), rng_(seed) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("mixed-state f must be in [0, 1]");
}

bool MixedStateSource::exact_branch() { return f_ >= 1.0 || (f_ > 0.0 && rng_.uniform() < f_); }

Bits MixedStateSource::uniform_bits(std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = rng_.coin() ? 1 : 0;
  return b;
}

}  // namespace rqcsim
