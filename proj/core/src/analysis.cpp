#include "rqcsim/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rqcsim/errors.h"

namespace rqcsim {

double ks_exponential(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("no samples");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = x[i] <= 0 ? 0.0 : -std::expm1(-x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

PTHistogram porter_thomas_check(std::span<const double> probabilities, double hilbert_dim, std::size_t bins,
                                double x_max) {
  if (bins == 0 || !(x_max > 0)) throw std::invalid_argument("bad histogram shape");
  if (probabilities.size() < bins) throw std::invalid_argument("fewer samples than bins");
  PTHistogram h;
  h.samples = probabilities.size();
  h.bin_width = x_max / static_cast<double>(bins);
  std::vector<double> xs;
  xs.reserve(probabilities.size());
  std::vector<double> counts(bins, 0.0);
  for (double p : probabilities) {
    if (!(p >= 0) || !std::isfinite(p)) throw std::invalid_argument("invalid probability");
    const double x = p * hilbert_dim;
    xs.push_back(x);
    const auto b = static_cast<std::size_t>(x / h.bin_width);
    if (b < bins) counts[b] += 1;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) * h.bin_width;
    h.x.push_back(lo + 0.5 * h.bin_width);
    h.empirical_density.push_back(counts[b] / (static_cast<double>(h.samples) * h.bin_width));
    // Bin average of e^{-x}, so both columns are comparable at any width.
    h.reference_density.push_back((std::exp(-lo) - std::exp(-lo - h.bin_width)) / h.bin_width);
  }
  h.ks_statistic = ks_exponential(std::move(xs));
  return h;
}

std::string pt_histogram_csv(const PTHistogram& h) {
  std::ostringstream os;
  os.precision(10);
  os << "x,empirical_density,reference_density\n";
  for (std::size_t i = 0; i < h.x.size(); ++i)
    os << h.x[i] << ',' << h.empirical_density[i] << ',' << h.reference_density[i] << '\n';
  return os.str();
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("pearson needs two equal-length samples");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) throw std::invalid_argument("pearson of a constant sample");
  if (a.data() == b.data()) return 1.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

PearsonReport pearson_vs_hamming(const std::vector<Bits>& s_c, const std::vector<std::vector<double>>& samples) {
  const std::size_t k = s_c.size();
  if (k < 2) throw std::invalid_argument("need at least two C strings");
  for (const auto& row : samples)
    if (row.size() != k) throw std::invalid_argument("every AB draw must cover the same C strings");
  // Column c holds the probabilities of s_c[c] across AB draws.
  std::vector<std::vector<double>> cols(k);
  for (const auto& row : samples)
    for (std::size_t c = 0; c < k; ++c) cols[c].push_back(row[c]);
  PearsonReport rep;
  std::map<int, std::vector<double>> by_d;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      PearsonPair p{i, j, hamming_distance(s_c[i], s_c[j]), pearson(cols[i], cols[j])};
      by_d[p.hamming].push_back(p.r);
      rep.pairs.push_back(p);
    }
  for (auto& [d, rs] : by_d) {
    PearsonByDistance g;
    g.hamming = d;
    g.pairs = rs.size();
    for (double r : rs) g.mean_r += r;
    g.mean_r /= static_cast<double>(rs.size());
    for (double r : rs) g.std_r += (r - g.mean_r) * (r - g.mean_r);
    g.std_r = rs.size() > 1 ? std::sqrt(g.std_r / static_cast<double>(rs.size() - 1)) : 0.0;
    rep.by_distance.push_back(g);
  }
  return rep;
}

std::string pearson_csv(const PearsonReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "hamming,mean_r,std_r\n";
  for (const auto& g : r.by_distance) os << g.hamming << ',' << g.mean_r << ',' << g.std_r << '\n';
  return os.str();
}

double xeb_fidelity(std::span<const double> sampled_probabilities, double hilbert_dim) {
  if (sampled_probabilities.empty()) throw std::invalid_argument("no samples");
  double s = 0;
  for (double p : sampled_probabilities) {
    if (!(p > 0)) throw NumericalError("sampled bit-string has zero probability");
    s += std::log(p);
  }
  return std::log(hilbert_dim) + std::numbers::egamma + s / static_cast<double>(sampled_probabilities.size());
}

double xeb_fidelity(std::span<const std::uint64_t> sampled_indexes, std::span<const double> distribution) {
  if (sampled_indexes.empty()) throw std::invalid_argument("no samples");
  double e_uniform = 0, e_psi = 0;
  for (double p : distribution) {
    if (!(p > 0)) throw NumericalError("distribution has a zero probability");
    e_uniform += std::log(p);
    e_psi += p * std::log(p);
  }
  e_uniform /= static_cast<double>(distribution.size());
  double s = 0;
  for (auto i : sampled_indexes) {
    if (i >= distribution.size()) throw std::invalid_argument("sample index out of range");
    s += std::log(distribution[i]);
  }
  s /= static_cast<double>(sampled_indexes.size());
  return (s - e_uniform) / (e_psi - e_uniform);
}

}  // namespace rqcsim
