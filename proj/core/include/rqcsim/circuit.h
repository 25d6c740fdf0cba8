#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rqcsim/gate.h"
#include "rqcsim/lattice.h"

namespace rqcsim {

// Depth written as "1+t+1": t two-qubit cycles between Hadamard layers.
struct DepthSpec {
  int t = 0;

  static DepthSpec parse(std::string_view text);
  std::string str() const;
  int last_cycle() const { return t + 1; }
  // Number of time blocks K = ceil(t / 8), at least 1.
  int blocks() const { return t <= 0 ? 1 : (t + 7) / 8; }
  // Block that absorbs a cycle: [1..8] -> 0, [9..16] -> 1, with the first
  // and last Hadamard layers merged into the first and last blocks.
  int block_of_cycle(int cycle) const;
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(Lattice lattice, DepthSpec depth, std::vector<Gate> gates);

  const Lattice& lattice() const { return lattice_; }
  const DepthSpec& depth() const { return depth_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t num_qubits() const { return lattice_.size(); }
  int blocks() const { return depth_.blocks(); }

  std::optional<std::uint64_t> seed;
  std::string rng_name;

  // Throws std::invalid_argument on a non-adjacent two-qubit gate, a gate
  // on a site outside the lattice, or a qubit used twice in one cycle.
  void validate() const;

  bool operator==(const Circuit& other) const {
    return lattice_ == other.lattice_ && depth_.t == other.depth_.t && gates_ == other.gates_;
  }

 private:
  Lattice lattice_;
  DepthSpec depth_;
  std::vector<Gate> gates_;
};

// Gates sorted by (cycle, first qubit).
void canonicalize(std::vector<Gate>& gates);

// Two-qubit gates with one endpoint in each part. The parts must be
// disjoint and together cover the lattice.
int cz_cut_count(const Circuit& circuit, const std::vector<int>& part_a, const std::vector<int>& part_b);

}  // namespace rqcsim
