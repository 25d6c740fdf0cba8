#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rqcsim/bits.h"
#include "rqcsim/circuit.h"
#include "rqcsim/executor.h"
#include "rqcsim/plan.h"
#include "rqcsim/rng.h"

namespace rqcsim {

enum class FidelityMode { exact, path_fraction, mixed };

const char* fidelity_mode_name(FidelityMode mode);

struct FidelitySpec {
  FidelityMode mode = FidelityMode::exact;
  double f = 1.0;
  std::uint64_t seed = 0;

  static FidelitySpec exact() { return {}; }
  static FidelitySpec path_fraction(double f, std::uint64_t seed) { return {FidelityMode::path_fraction, f, seed}; }
  static FidelitySpec mixed(double f, std::uint64_t seed) { return {FidelityMode::mixed, f, seed}; }
  // Throws std::invalid_argument when f is out of range for the mode.
  void validate() const;
};

struct PathStats {
  std::uint64_t total_paths = 0;
  std::uint64_t paths_used = 0;
  double f_target = 1.0;
  // Per selected path: N * mean |contribution|^2 over the computed
  // amplitudes, an estimate of <psi_p|psi_p>.
  std::vector<double> path_norms;
  // N * mean |amplitude|^2, an estimate of <psi~|psi~>. Near-orthogonal
  // paths make this the achieved fidelity.
  double f_achieved_estimate = 0;
};

struct AmplitudeResult {
  Bits out;
  cdouble value;
  PathStats stats;
};

struct AmplitudeBatch {
  Bits s_ab;  // bits on the non-C positions, ascending
  std::vector<int> c_sites;
  std::vector<Bits> s_c;  // bits on the C positions, ascending
  std::vector<cdouble> amplitudes;
  std::vector<double> probabilities;  // |amplitude|^2
  PathStats stats;

  std::size_t size() const { return s_c.size(); }
};

struct EngineOptions {
  ExecOptions exec;
  bool double_precision = false;
};

// Amplitudes <out|U|in> for one circuit and input through a contraction
// plan. Safe for concurrent const use.
class AmplitudeEngine {
 public:
  AmplitudeEngine(const Circuit& circuit, ContractionPlan plan, const Bits& in, EngineOptions options = {});
  ~AmplitudeEngine();
  AmplitudeEngine(AmplitudeEngine&&) noexcept;
  AmplitudeEngine& operator=(AmplitudeEngine&&) noexcept;

  const Circuit& circuit() const { return circuit_; }
  const ContractionPlan& plan() const;
  const CostEstimate& cost() const;
  const Bits& input() const { return in_; }
  std::size_t num_qubits() const { return circuit_.num_qubits(); }
  bool double_precision() const { return options_.double_precision; }

  // The cheap batch region: the plan's batch sites and their positions.
  const std::vector<int>& c_sites() const { return c_sites_; }
  const std::vector<int>& c_positions() const { return c_positions_; }
  const std::vector<int>& ab_positions() const { return ab_positions_; }
  Bits join(const Bits& s_ab, const Bits& s_c) const;

  std::uint64_t total_paths() const;
  // All paths unless a path fraction is requested.
  std::vector<Path> select_paths(const FidelitySpec& spec) const;

  AmplitudeResult amplitude(const Bits& out, const FidelitySpec& spec = {}) const;
  // Several outputs over the same paths; per-path work on sites whose bits
  // agree across outputs is done once.
  std::vector<AmplitudeResult> amplitudes(const std::vector<Bits>& outs, const FidelitySpec& spec = {}) const;
  std::vector<cdouble> path_contributions(const Bits& out, const std::vector<Path>& paths) const;

  AmplitudeBatch amplitude_batch(const Bits& s_ab, const std::vector<Bits>& s_c, const FidelitySpec& spec = {}) const;
  // n_c distinct suffixes drawn with the seed.
  AmplitudeBatch amplitude_batch(const Bits& s_ab, std::size_t n_c, std::uint64_t seed,
                                 const FidelitySpec& spec = {}) const;
  // Rejects a C region that differs from the plan's.
  void check_c_region(const std::vector<int>& sites) const;

 private:
  struct Impl;
  template <class T>
  struct ImplT;
  std::vector<std::vector<cdouble>> run(const std::vector<Path>& paths, const std::vector<Bits>& outs) const;
  PathStats stats_for(const std::vector<Path>& paths, const FidelitySpec& spec,
                      const std::vector<std::vector<cdouble>>& parts) const;

  Circuit circuit_;
  Bits in_;
  EngineOptions options_;
  std::unique_ptr<Impl> impl_;
  std::vector<int> c_sites_;
  std::vector<int> c_positions_;
  std::vector<int> ab_positions_;
};

// n_c distinct bit-strings of length bits drawn uniformly.
std::vector<Bits> random_suffixes(std::size_t bits, std::size_t n_c, std::uint64_t seed);

// Noisy-state model rho = f |psi><psi| + (1 - f) I / N: per request, either
// defer to exact sampling or emit a uniform bit-string.
class MixedStateSource {
 public:
  MixedStateSource(double f, std::uint64_t seed);
  double f() const { return f_; }
  bool exact_branch();
  Bits uniform_bits(std::size_t n);

 private:
  double f_;
  Rng rng_;
};

}  // namespace rqcsim
