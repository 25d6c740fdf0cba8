#include "rqcsim/circuit.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

#include "rqcsim/bits.h"

namespace rqcsim {

Bits bits_from_string(std::string_view s) {
  Bits b;
  b.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit-string must contain only 0 and 1");
    b.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return b;
}

std::string bits_to_string(const Bits& b) {
  std::string s;
  s.reserve(b.size());
  for (auto x : b) s.push_back(static_cast<char>('0' + x));
  return s;
}

Bits bits_from_index(std::uint64_t index, std::size_t n) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[n - 1 - i] = static_cast<std::uint8_t>((index >> i) & 1);
  return b;
}

std::uint64_t bits_to_index(const Bits& b) {
  std::uint64_t x = 0;
  for (auto v : b) x = (x << 1) | v;
  return x;
}

int hamming_distance(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

DepthSpec DepthSpec::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad depth: " + std::string(text));
    return v;
  };
  DepthSpec d;
  if (text.substr(0, 2) == "1+" && text.size() > 4 && text.substr(text.size() - 2) == "+1")
    d.t = parse_int(text.substr(2, text.size() - 4));
  else
    d.t = parse_int(text);
  if (d.t < 0) throw std::invalid_argument("negative depth");
  return d;
}

std::string DepthSpec::str() const { return "1+" + std::to_string(t) + "+1"; }

int DepthSpec::block_of_cycle(int cycle) const {
  if (cycle <= 0) return 0;
  if (cycle > t) return blocks() - 1;
  return std::min((cycle - 1) / 8, blocks() - 1);
}

void canonicalize(std::vector<Gate>& gates) {
  // Both two-qubit gates are symmetric under exchange of their qubits.
  for (Gate& g : gates)
    if (g.two_qubit() && g.q1 < g.q0) std::swap(g.q0, g.q1);
  std::stable_sort(gates.begin(), gates.end(), [](const Gate& a, const Gate& b) {
    if (a.cycle != b.cycle) return a.cycle < b.cycle;
    return a.q0 < b.q0;
  });
}

Circuit::Circuit(Lattice lattice, DepthSpec depth, std::vector<Gate> gates)
    : lattice_(std::move(lattice)), depth_(depth), gates_(std::move(gates)) {
  canonicalize(gates_);
}

void Circuit::validate() const {
  std::set<std::pair<int, int>> used;
  for (const Gate& g : gates_) {
    if (g.cycle < 0 || g.cycle > depth_.last_cycle())
      throw std::invalid_argument("gate cycle " + std::to_string(g.cycle) + " outside depth " + depth_.str());
    if (gate_arity(g.kind) != (g.two_qubit() ? 2 : 1))
      throw std::invalid_argument("wrong qubit count for gate " + std::string(gate_name(g.kind)));
    for (int q : {g.q0, g.q1}) {
      if (q < 0 && q == g.q1) continue;
      if (!lattice_.contains(q)) throw std::invalid_argument("qubit " + std::to_string(q) + " not in lattice");
      if (!used.insert({g.cycle, q}).second)
        throw std::invalid_argument("qubit " + std::to_string(q) + " used twice in cycle " + std::to_string(g.cycle));
    }
    if (g.two_qubit() && !lattice_.adjacent(g.q0, g.q1))
      throw std::invalid_argument("qubits " + std::to_string(g.q0) + " and " + std::to_string(g.q1) +
                                  " are not adjacent");
  }
}

int cz_cut_count(const Circuit& circuit, const std::vector<int>& part_a, const std::vector<int>& part_b) {
  const Lattice& lat = circuit.lattice();
  std::vector<int> side(lat.size(), -1);
  auto mark = [&](const std::vector<int>& part, int s) {
    for (int id : part) {
      int p = lat.position(id);
      if (p < 0) throw std::invalid_argument("partition site " + std::to_string(id) + " not in lattice");
      if (side[p] >= 0) throw std::invalid_argument("partition parts overlap at site " + std::to_string(id));
      side[p] = s;
    }
  };
  mark(part_a, 0);
  mark(part_b, 1);
  if (std::find(side.begin(), side.end(), -1) != side.end())
    throw std::invalid_argument("partition does not cover the lattice");
  int count = 0;
  for (const Gate& g : circuit.gates())
    if (g.two_qubit() && side[lat.position(g.q0)] != side[lat.position(g.q1)]) ++count;
  return count;
}

}  // namespace rqcsim
