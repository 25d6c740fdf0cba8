#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rqcsim/bits.h"

namespace rqcsim {

// Histogram of x = N p against the Porter-Thomas density e^{-x}.
struct PTHistogram {
  double bin_width = 0;
  std::vector<double> x;  // bin centers
  std::vector<double> empirical_density;
  std::vector<double> reference_density;
  std::size_t samples = 0;
  // Kolmogorov-Smirnov distance to the CDF 1 - e^{-x}.
  double ks_statistic = 0;
};

PTHistogram porter_thomas_check(std::span<const double> probabilities, double hilbert_dim, std::size_t bins = 50,
                                double x_max = 10.0);
// KS distance of x-samples to Exp(1).
double ks_exponential(std::vector<double> x);
std::string pt_histogram_csv(const PTHistogram& h);

double pearson(std::span<const double> a, std::span<const double> b);

struct PearsonPair {
  std::size_t i = 0;
  std::size_t j = 0;
  int hamming = 0;
  double r = 0;
};

struct PearsonByDistance {
  int hamming = 0;
  std::size_t pairs = 0;
  double mean_r = 0;
  double std_r = 0;
};

struct PearsonReport {
  std::vector<PearsonPair> pairs;
  std::vector<PearsonByDistance> by_distance;
};

// samples[a][c]: probability of AB draw a joined with s_c[c]. Correlates
// every pair of C strings across the AB draws.
PearsonReport pearson_vs_hamming(const std::vector<Bits>& s_c, const std::vector<std::vector<double>>& samples);
std::string pearson_csv(const PearsonReport& r);

// Log cross-entropy fidelity log(N) + gamma + mean log p(s), which is 1 for
// samples from a Porter-Thomas |psi|^2, 0 for uniform samples, and affine in
// the mixing weight of a noisy state.
double xeb_fidelity(std::span<const double> sampled_probabilities, double hilbert_dim);
// Same estimator calibrated on a full distribution instead of the
// Porter-Thomas limit: (mean log p(s) - E_uniform) / (E_psi - E_uniform).
double xeb_fidelity(std::span<const std::uint64_t> sampled_indexes, std::span<const double> distribution);

}  // namespace rqcsim
