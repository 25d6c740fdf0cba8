#include "rqcsim/partition_cost.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rqcsim {
namespace {

double lg_sum(std::initializer_list<double> exps) {
  double m = -std::numeric_limits<double>::infinity();
  for (double e : exps) m = std::max(m, e);
  double s = 0;
  for (double e : exps) s += std::exp2(e - m);
  return m + std::log2(s);
}

std::vector<int> sites_where(const Lattice& lat, auto pred) {
  std::vector<int> out;
  for (int s : lat.site_ids()) {
    Site c = lat.coord(s);
    if (pred(c.row, c.col)) out.push_back(s);
  }
  return out;
}

std::vector<int> complement(const Lattice& lat, const std::vector<int>& part) {
  std::vector<int> out;
  for (int s : lat.site_ids())
    if (!std::binary_search(part.begin(), part.end(), s)) out.push_back(s);
  return out;
}

struct Bounds {
  int r0 = 1 << 30, r1 = -1, c0 = 1 << 30, c1 = -1;
};

Bounds bounds(const Lattice& lat) {
  Bounds b;
  for (int s : lat.site_ids()) {
    Site c = lat.coord(s);
    b.r0 = std::min(b.r0, c.row);
    b.r1 = std::max(b.r1, c.row);
    b.c0 = std::min(b.c0, c.col);
    b.c1 = std::max(b.c1, c.col);
  }
  return b;
}

std::vector<PartitionResult> bi_family(const Circuit& circuit) {
  const Lattice& lat = circuit.lattice();
  const Bounds b = bounds(lat);
  std::vector<PartitionResult> out;
  auto add = [&](std::vector<int> a, const std::string& params) {
    if (a.empty() || a.size() == lat.size()) return;
    // Bisections only: a lopsided split just moves the cost into one part.
    const std::size_t other = lat.size() - a.size();
    if (4 * (std::max(a.size(), other) - std::min(a.size(), other)) > lat.size()) return;
    auto rest = complement(lat, a);
    PartitionSpec spec = make_partition(circuit, {std::move(a), std::move(rest)}, "bi", params);
    out.push_back({spec, qubit_complexity(spec)});
  };
  for (int k = b.c0 + 1; k <= b.c1; ++k)
    add(sites_where(lat, [&](int, int c) { return c < k; }), "col<" + std::to_string(k));
  for (int k = b.r0 + 1; k <= b.r1; ++k)
    add(sites_where(lat, [&](int r, int) { return r < k; }), "row<" + std::to_string(k));
  if (lat.kind() != Lattice::Kind::rectangular) {
    for (int k = b.r0 + b.c0 + 1; k <= b.r1 + b.c1; ++k)
      add(sites_where(lat, [&](int r, int c) { return r + c < k; }), "row+col<" + std::to_string(k));
    for (int k = b.r0 - b.c1 + 1; k <= b.r1 - b.c0; ++k)
      add(sites_where(lat, [&](int r, int c) { return r - c < k; }), "row-col<" + std::to_string(k));
  }
  return out;
}

std::vector<PartitionResult> tri_family(const Circuit& circuit) {
  const Lattice& lat = circuit.lattice();
  auto bis = bi_family(circuit);
  if (bis.empty()) throw std::invalid_argument("lattice too small to partition");
  const auto best = std::min_element(bis.begin(), bis.end(), [](const auto& x, const auto& y) {
    return x.cost < y.cost;
  });
  auto a = best->spec.parts[0], r = best->spec.parts[1];
  if (a.size() < r.size()) std::swap(a, r);
  // Split the smaller side along anti-diagonals, B toward the top-right.
  auto key = [&](int s) {
    Site c = lat.coord(s);
    return c.row - c.col;
  };
  std::vector<int> keys;
  for (int s : r) keys.push_back(key(s));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  // Threshold that splits the side most evenly.
  std::size_t bal = 0;
  std::size_t best_gap = r.size();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::size_t nb = std::count_if(r.begin(), r.end(), [&](int s) { return key(s) < keys[i]; });
    std::size_t gap = nb * 2 > r.size() ? nb * 2 - r.size() : r.size() - nb * 2;
    if (gap < best_gap) {
      best_gap = gap;
      bal = i;
    }
  }
  std::vector<PartitionResult> out;
  for (int d = 1; d <= 5; ++d) {
    const long idx = static_cast<long>(bal) + d - 3;
    if (idx <= 0 || idx >= static_cast<long>(keys.size())) continue;
    const int t = keys[idx];
    std::vector<int> pb, pc;
    for (int s : r) (key(s) < t ? pb : pc).push_back(s);
    if (pb.empty() || pc.empty()) continue;
    PartitionSpec spec =
        make_partition(circuit, {a, pb, pc}, "tri", best->spec.params + ";row-col<" + std::to_string(t));
    spec.d = d;
    out.push_back({spec, qubit_complexity(spec)});
  }
  return out;
}

std::vector<PartitionResult> quad_family(const Circuit& circuit) {
  const Lattice& lat = circuit.lattice();
  const Bounds b = bounds(lat);
  const int rm = (b.r0 + b.r1 + 1) / 2, cm = (b.c0 + b.c1 + 1) / 2;
  std::vector<PartitionResult> out;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      const int rs = rm + dr, cs = cm + dc;
      auto pa = sites_where(lat, [&](int r, int c) { return r < rs && c < cs; });
      auto pb = sites_where(lat, [&](int r, int c) { return r < rs && c >= cs; });
      auto pc = sites_where(lat, [&](int r, int c) { return r >= rs && c >= cs; });
      auto pd = sites_where(lat, [&](int r, int c) { return r >= rs && c < cs; });
      if (pa.empty() || pb.empty() || pc.empty() || pd.empty()) continue;
      PartitionSpec spec = make_partition(circuit, {pa, pb, pc, pd}, "quad",
                                          "row<" + std::to_string(rs) + ";col<" + std::to_string(cs));
      out.push_back({spec, qubit_complexity(spec)});
    }
  return out;
}

}  // namespace

double bipartition_complexity(int alpha_ab, int n_a, int n_b) { return alpha_ab + lg_sum({double(n_a), double(n_b)}); }

double tripartition_complexity(int alpha_ab, int alpha_ac, int alpha_bc, int n_a, int n_b, int n_c) {
  return alpha_ab + alpha_ac + lg_sum({double(n_a), alpha_bc + lg_sum({double(n_b), double(n_c)})});
}

double quadpartition_complexity(int alpha_ab, int alpha_bc, int alpha_cd, int alpha_ad, int n_a, int n_b, int n_c,
                                int n_d) {
  return alpha_ab + alpha_cd + lg_sum({alpha_bc + lg_sum({double(n_b), double(n_c)}),
                                       alpha_ad + lg_sum({double(n_a), double(n_d)})});
}

std::vector<int> PartitionSpec::sizes() const {
  std::vector<int> out;
  for (const auto& p : parts) out.push_back(static_cast<int>(p.size()));
  return out;
}

int cz_count_between(const Circuit& circuit, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  int count = 0;
  for (const Gate& g : circuit.gates()) {
    if (!g.two_qubit()) continue;
    const bool a0 = std::binary_search(sa.begin(), sa.end(), g.q0), a1 = std::binary_search(sa.begin(), sa.end(), g.q1);
    const bool b0 = std::binary_search(sb.begin(), sb.end(), g.q0), b1 = std::binary_search(sb.begin(), sb.end(), g.q1);
    if ((a0 && b1) || (a1 && b0)) ++count;
  }
  return count;
}

PartitionSpec make_partition(const Circuit& circuit, std::vector<std::vector<int>> parts, std::string scheme,
                             std::string params) {
  const Lattice& lat = circuit.lattice();
  std::vector<int> seen(lat.size(), 0);
  for (auto& p : parts) {
    std::sort(p.begin(), p.end());
    for (int s : p) {
      int pos = lat.position(s);
      if (pos < 0) throw std::invalid_argument("partition site " + std::to_string(s) + " not in lattice");
      if (seen[pos]++) throw std::invalid_argument("partition parts overlap at site " + std::to_string(s));
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) > 0) throw std::invalid_argument("partition does not cover the lattice");
  PartitionSpec spec;
  spec.scheme = std::move(scheme);
  spec.params = std::move(params);
  spec.parts = std::move(parts);
  const std::size_t k = spec.parts.size();
  spec.alpha.assign(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      // Pairs covering the lattice go through cz_cut_count directly.
      int a = k == 2 ? cz_cut_count(circuit, spec.parts[i], spec.parts[j])
                     : cz_count_between(circuit, spec.parts[i], spec.parts[j]);
      spec.alpha[i][j] = spec.alpha[j][i] = a;
    }
  return spec;
}

double qubit_complexity(const PartitionSpec& spec) {
  const auto n = spec.sizes();
  const auto& al = spec.alpha;
  switch (spec.parts.size()) {
    case 2:
      return bipartition_complexity(al[0][1], n[0], n[1]);
    case 3: {
      int a = static_cast<int>(std::max_element(n.begin(), n.end()) - n.begin());
      int b = (a + 1) % 3, c = (a + 2) % 3;
      return tripartition_complexity(al[a][b], al[a][c], al[b][c], n[a], n[b], n[c]);
    }
    case 4:
      if (al[0][2] != 0 || al[1][3] != 0)
        throw std::invalid_argument("four-part partition must be a ring A-B-C-D-A");
      return quadpartition_complexity(al[0][1], al[1][2], al[2][3], al[0][3], n[0], n[1], n[2], n[3]);
    default:
      throw std::invalid_argument("qubit complexity needs 2 to 4 parts");
  }
}

std::vector<PartitionResult> partition_family(const Circuit& circuit, const std::string& scheme) {
  if (scheme == "bi") return bi_family(circuit);
  if (scheme == "tri") return tri_family(circuit);
  if (scheme == "quad") return quad_family(circuit);
  throw std::invalid_argument("unknown partition scheme '" + scheme + "' (expected bi, tri, quad)");
}

PartitionResult best_partition(const Circuit& circuit, const std::string& scheme) {
  auto all = partition_family(circuit, scheme);
  if (all.empty()) throw std::invalid_argument("no " + scheme + " partition fits this lattice");
  return *std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.cost < b.cost; });
}

std::string partition_csv(const std::vector<PartitionResult>& results) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "scheme,params,cost_log2\n";
  for (const auto& r : results) {
    std::string params = r.spec.params;
    if (r.spec.scheme == "tri") params = "d=" + std::to_string(r.spec.d) + ";" + params;
    os << r.spec.scheme << ',' << params << ',' << r.cost << '\n';
  }
  return os.str();
}

}  // namespace rqcsim
