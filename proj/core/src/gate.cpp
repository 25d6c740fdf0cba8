#include "rqcsim/gate.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rqcsim {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::h: return "h";
    case GateKind::t: return "t";
    case GateKind::x_1_2: return "x_1_2";
    case GateKind::y_1_2: return "y_1_2";
    case GateKind::cz: return "cz";
    case GateKind::iswap: return "iswap";
    case GateKind::delta_0: return "delta_0";
    case GateKind::delta_1: return "delta_1";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (GateKind k : {GateKind::h, GateKind::t, GateKind::x_1_2, GateKind::y_1_2, GateKind::cz, GateKind::iswap,
                     GateKind::delta_0, GateKind::delta_1})
    if (gate_name(k) == name) return k;
  return std::nullopt;
}

int gate_arity(GateKind kind) { return kind == GateKind::cz || kind == GateKind::iswap ? 2 : 1; }

Matrix2 single_qubit_matrix(GateKind kind) {
  using C = std::complex<double>;
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::h: return {C(r), C(r), C(r), C(-r)};
    case GateKind::t: return {C(1), C(0), C(0), std::polar(1.0, M_PI / 4)};
    // Square roots of X and Y up to a global phase of e^{i pi/4}.
    case GateKind::x_1_2: return {C(.5, .5), C(.5, -.5), C(.5, -.5), C(.5, .5)};
    case GateKind::y_1_2: return {C(.5, .5), C(-.5, -.5), C(.5, .5), C(.5, .5)};
    default: break;
  }
  throw std::invalid_argument("not a single-qubit unitary: " + std::string(gate_name(kind)));
}

Matrix4 two_qubit_matrix(GateKind kind) {
  using C = std::complex<double>;
  Matrix4 m{};
  switch (kind) {
    case GateKind::cz:
      m[0] = m[5] = m[10] = 1;
      m[15] = -1;
      return m;
    case GateKind::iswap:
      m[0] = m[15] = 1;
      m[1 * 4 + 2] = C(0, 1);
      m[2 * 4 + 1] = C(0, 1);
      return m;
    default: break;
  }
  throw std::invalid_argument("not a two-qubit gate: " + std::string(gate_name(kind)));
}

}  // namespace rqcsim
