#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rqcsim/amplitude_engine.h"
#include "rqcsim/bits.h"
#include "rqcsim/builtin_plans.h"
#include "rqcsim/errors.h"
#include "rqcsim/generator.h"
#include "rqcsim/oracle.h"
#include "rqcsim/rng.h"
#include "rqcsim/thread_pool.h"

namespace rqcsim {
namespace {

const Matrix2 kPauliX{0.0, 1.0, 1.0, 0.0};

StateVector random_state(std::size_t n, std::uint64_t seed) {
  StateVector s(n);
  Rng rng(seed);
  double norm = 0;
  for (auto& a : s.amplitudes()) {
    a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    norm += std::norm(a);
  }
  for (auto& a : s.amplitudes()) a /= std::sqrt(norm);
  return s;
}

double max_diff(std::span<const cdouble> a, std::span<const cdouble> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(StateVector, PositionZeroIsMostSignificant) {
  StateVector s(3);
  s.apply(0, kPauliX);
  EXPECT_EQ(s.amplitudes()[4], cdouble(1));
  StateVector b = StateVector::basis(bits_from_string("011"));
  EXPECT_EQ(b.amplitudes()[3], cdouble(1));
  b.apply(2, kPauliX);
  EXPECT_EQ(b.amplitudes()[2], cdouble(1));
}

TEST(StateVector, CzFlipsOnlyBothOnes) {
  for (std::uint64_t k = 0; k < 4; ++k) {
    StateVector s = StateVector::basis(bits_from_index(k, 2));
    s.apply(0, 1, two_qubit_matrix(GateKind::cz));
    EXPECT_EQ(s.amplitudes()[k], cdouble(k == 3 ? -1 : 1));
  }
}

TEST(StateVector, HadamardLayerIsUniform) {
  StateVector s(10);
  for (int q = 0; q < 10; ++q) s.apply(q, single_qubit_matrix(GateKind::h));
  for (auto a : s.amplitudes()) EXPECT_NEAR(std::abs(a - cdouble(1.0 / 32.0)), 0.0, 1e-15);
}

TEST(StateVector, RespectsQubitCap) {
  EXPECT_THROW(StateVector(27), ResourceError);
  EXPECT_THROW(StateVector(12, 10), ResourceError);
  Circuit c = generate_rqc(Lattice::rectangular(3, 4), DepthSpec{8}, 1);
  EXPECT_THROW(evolve(c, Bits(12, 0), OracleOptions{10, nullptr}), ResourceError);
}

TEST(StateVector, DisjointGatesCommute) {
  const Matrix2 x = single_qubit_matrix(GateKind::x_1_2);
  const Matrix4 cz = two_qubit_matrix(GateKind::cz);
  const Matrix4 iswap = two_qubit_matrix(GateKind::iswap);
  StateVector a = random_state(6, 1);
  StateVector b = a;
  a.apply(0, 1, cz);
  a.apply(4, 2, iswap);
  a.apply(5, x);
  b.apply(5, x);
  b.apply(4, 2, iswap);
  b.apply(0, 1, cz);
  EXPECT_LT(max_diff(a.amplitudes(), b.amplitudes()), 1e-14);
}

TEST(StateVector, PoolDoesNotChangeResult) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 2);
  ThreadPool pool(4);
  StateVector serial = evolve(c, Bits(16, 0));
  StateVector threaded = evolve(c, Bits(16, 0), OracleOptions{26, &pool});
  EXPECT_LT(max_diff(serial.amplitudes(), threaded.amplitudes()), 1e-14);
}

TEST(Evolve, EmptyCircuitIsIdentity) {
  Circuit c(Lattice::rectangular(2, 2), DepthSpec{0}, {});
  Bits in = bits_from_string("1010");
  StateVector s = evolve(c, in);
  EXPECT_EQ(s.amplitudes()[bits_to_index(in)], cdouble(1));
  EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
}

TEST(Evolve, HandBuiltBellState) {
  std::vector<Gate> gates{{GateKind::h, 0, 0}, {GateKind::h, 0, 1}, {GateKind::cz, 1, 0, 1}, {GateKind::h, 2, 1}};
  Circuit c(Lattice::rectangular(1, 2), DepthSpec{1}, gates);
  StateVector s = evolve(c, Bits(2, 0));
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.amplitudes()[0] - cdouble(r)), 0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()[1]), 0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()[2]), 0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()[3] - cdouble(r)), 0, 1e-15);
  EXPECT_NEAR(std::abs(exact_amplitude(c, Bits(2, 0), bits_from_string("11")) - cdouble(r)), 0, 1e-15);
}

TEST(Evolve, NormPreservedAfterEveryCycle) {
  Circuit c = generate_rqc(Lattice::rectangular(3, 4), DepthSpec{24}, 4);
  for (int k = 0; k <= c.depth().last_cycle(); ++k) {
    std::vector<Gate> prefix;
    for (const Gate& g : c.gates())
      if (g.cycle <= k) prefix.push_back(g);
    Circuit partial(c.lattice(), c.depth(), prefix);
    EXPECT_NEAR(evolve(partial, Bits(12, 0)).norm_squared(), 1.0, 1e-12) << "cycle " << k;
  }
}

TEST(Evolve, DistributionSumsToOne) {
  for (const char* name : {"grid:4x5", "grid:3x6", "bristlecone-24"}) {
    Circuit c = generate_rqc(Lattice::by_name(name), DepthSpec{16}, 1);
    auto p = exact_distribution(c, Bits(c.num_qubits(), 0));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-10);
  }
}

TEST(Evolve, AgreesWithTensorNetworkEngine) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 6);
  Bits in(16, 0);
  StateVector s = evolve(c, in);
  EngineOptions opts;
  opts.double_precision = true;
  AmplitudeEngine e(c, builtin_plan(c), in, opts);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    std::uint64_t k = rng.below(65536);
    cdouble want = s.amplitudes()[k];
    cdouble got = e.amplitude(bits_from_index(k, 16)).value;
    EXPECT_LT(std::abs(got - want) / std::max(std::abs(want), 1.0 / 256), 1e-10) << k;
  }
}

}  // namespace
}  // namespace rqcsim
