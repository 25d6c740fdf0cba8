#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace rqcsim {

enum class GateKind { h, t, x_1_2, y_1_2, cz, iswap, delta_0, delta_1 };

struct Gate {
  GateKind kind = GateKind::h;
  int cycle = 0;
  int q0 = 0;
  int q1 = -1;

  bool two_qubit() const { return q1 >= 0; }
  bool operator==(const Gate&) const = default;
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);
int gate_arity(GateKind kind);

using Matrix2 = std::array<std::complex<double>, 4>;
using Matrix4 = std::array<std::complex<double>, 16>;

// Row-major [out][in]. For two-qubit gates the first qubit is the more
// significant bit of each 2-bit index.
Matrix2 single_qubit_matrix(GateKind kind);
Matrix4 two_qubit_matrix(GateKind kind);

}  // namespace rqcsim
