#include "rqcsim/gate_tensor.h"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace rqcsim {

Tensor<cdouble> gate_tensor(GateKind kind) {
  if (kind == GateKind::delta_0) return Tensor<cdouble>({"out"}, {2}, {1, 0});
  if (kind == GateKind::delta_1) return Tensor<cdouble>({"out"}, {2}, {0, 1});
  if (gate_arity(kind) == 1) {
    auto m = single_qubit_matrix(kind);
    return Tensor<cdouble>({"out", "in"}, {2, 2}, std::vector<cdouble>(m.begin(), m.end()));
  }
  // Matrix rows are (out0 out1), columns (in0 in1): already row-major in
  // the label order out0, out1, in0, in1.
  auto m = two_qubit_matrix(kind);
  return Tensor<cdouble>({"out0", "out1", "in0", "in1"}, {2, 2, 2, 2}, std::vector<cdouble>(m.begin(), m.end()));
}

FactoredGate factor_two_qubit(GateKind kind, double tolerance) {
  if (gate_arity(kind) != 2) throw std::invalid_argument("factor_two_qubit: not a two-qubit gate");
  auto u = two_qubit_matrix(kind);
  // Regroup U[(o0 o1), (i0 i1)] into M[(o0 i0), (o1 i1)].
  Eigen::Matrix4cd m;
  for (int o0 = 0; o0 < 2; ++o0)
    for (int o1 = 0; o1 < 2; ++o1)
      for (int i0 = 0; i0 < 2; ++i0)
        for (int i1 = 0; i1 < 2; ++i1) m(2 * o0 + i0, 2 * o1 + i1) = u[(2 * o0 + o1) * 4 + 2 * i0 + i1];
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  while (rank < 4 && s(rank) > tolerance * s(0)) ++rank;

  FactoredGate f;
  f.rank = rank;
  std::vector<cdouble> a(rank * 4), b(rank * 4);
  for (std::size_t v = 0; v < rank; ++v) {
    double w = std::sqrt(s(v));
    for (int x = 0; x < 4; ++x) {
      a[v * 4 + x] = w * svd.matrixU()(x, v);
      b[v * 4 + x] = w * std::conj(svd.matrixV()(x, v));
    }
  }
  f.first = Tensor<cdouble>({"v", "out", "in"}, {rank, 2, 2}, std::move(a));
  f.second = Tensor<cdouble>({"v", "out", "in"}, {rank, 2, 2}, std::move(b));
  return f;
}

}  // namespace rqcsim
