#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rqcsim/circuit.h"

namespace rqcsim {

// Index in [0, 8) of the two-qubit layer pattern a bond belongs to. Layers
// alternate horizontal and vertical; each bond is used once per 8 cycles.
int bond_pattern(const Lattice& lattice, int a, int b);

// Bonds active in a given two-qubit cycle (cycle >= 1).
std::vector<std::pair<int, int>> layer_bonds(const Lattice& lattice, int cycle);

Circuit generate_rqc(const Lattice& lattice, DepthSpec depth, std::uint64_t seed,
                     GateKind two_qubit_gate = GateKind::cz);

}  // namespace rqcsim
