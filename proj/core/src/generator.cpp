#include "rqcsim/generator.h"

#include <stdexcept>

#include "rqcsim/rng.h"

namespace rqcsim {

int bond_pattern(const Lattice& lattice, int a, int b) {
  if (a > b) std::swap(a, b);
  Site s = lattice.coord(a);
  Site t = lattice.coord(b);
  if (s.row == t.row && t.col == s.col + 1) return 2 * ((s.col + 2 * s.row) % 4);
  if (s.col == t.col && t.row == s.row + 1) return 2 * ((s.row + 2 * s.col) % 4) + 1;
  throw std::invalid_argument("bond_pattern: sites are not nearest neighbors");
}

std::vector<std::pair<int, int>> layer_bonds(const Lattice& lattice, int cycle) {
  if (cycle < 1) return {};
  int pattern = (cycle - 1) % 8;
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : lattice.bonds())
    if (bond_pattern(lattice, a, b) == pattern) out.emplace_back(a, b);
  return out;
}

Circuit generate_rqc(const Lattice& lattice, DepthSpec depth, std::uint64_t seed, GateKind two_qubit_gate) {
  if (depth.t < 0) throw std::invalid_argument("negative depth");
  if (lattice.size() == 0) throw std::invalid_argument("empty lattice");
  if (gate_arity(two_qubit_gate) != 2) throw std::invalid_argument("two-qubit gate expected");

  Rng rng(seed);
  const std::size_t n = lattice.size();
  const auto& ids = lattice.site_ids();
  std::vector<Gate> gates;

  // What each qubit did in the previous cycle.
  enum class Prev { none, hxy, t, two_qubit };
  std::vector<Prev> prev(n, Prev::hxy);

  for (int q : ids) gates.push_back({GateKind::h, 0, q, -1});

  for (int cycle = 1; cycle <= depth.t; ++cycle) {
    std::vector<bool> busy(n, false);
    for (auto [a, b] : layer_bonds(lattice, cycle)) {
      gates.push_back({two_qubit_gate, cycle, a, b});
      busy[lattice.position(a)] = busy[lattice.position(b)] = true;
    }
    std::vector<Prev> next(n, Prev::none);
    for (std::size_t p = 0; p < n; ++p) {
      if (busy[p]) {
        next[p] = Prev::two_qubit;
      } else if (prev[p] == Prev::two_qubit) {
        gates.push_back({rng.coin() ? GateKind::y_1_2 : GateKind::x_1_2, cycle, ids[p], -1});
        next[p] = Prev::hxy;
      } else if (prev[p] == Prev::hxy) {
        gates.push_back({GateKind::t, cycle, ids[p], -1});
        next[p] = Prev::t;
      }
    }
    prev = std::move(next);
  }

  for (int q : ids) gates.push_back({GateKind::h, depth.last_cycle(), q, -1});

  Circuit c(lattice, depth, std::move(gates));
  c.seed = seed;
  c.rng_name = std::string(Rng::kAlgorithm);
  return c;
}

}  // namespace rqcsim
