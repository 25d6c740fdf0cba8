#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rqcsim/circuit.h"

namespace rqcsim {

// Circuit text format:
//   # lattice: grid:4x4        (header comments are optional)
//   # depth: 1+8+1
//   16                         (qubit count)
//   <cycle> <gate> <q0> [<q1>]
// The lattice comes from the header, else from `lattice_hint`. Errors are
// reported as ParseError with the offending line.
Circuit parse_circuit(std::string_view text, const std::optional<Lattice>& lattice_hint = std::nullopt);
std::string write_circuit(const Circuit& circuit);

Circuit load_circuit(const std::string& path, const std::optional<Lattice>& lattice_hint = std::nullopt);
void save_circuit(const Circuit& circuit, const std::string& path);

}  // namespace rqcsim
