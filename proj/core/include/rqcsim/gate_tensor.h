#pragma once

#include <cstddef>

#include "rqcsim/gate.h"
#include "rqcsim/tensor.h"

namespace rqcsim {

// Single-qubit gates: labels {"out", "in"}. Two-qubit gates: labels
// {"out0", "out1", "in0", "in1"}, qubit 0 being the gate's first qubit.
// Deltas are rank-1 vectors with label {"out"}.
Tensor<cdouble> gate_tensor(GateKind kind);

// Operator-Schmidt factorization U = sum_v first_v (x) second_v with the
// minimal number of terms. Factors carry labels {"v", "out", "in"}.
struct FactoredGate {
  std::size_t rank = 0;
  Tensor<cdouble> first;
  Tensor<cdouble> second;
};

FactoredGate factor_two_qubit(GateKind kind, double tolerance = 1e-12);

}  // namespace rqcsim
