#include <gtest/gtest.h>

#include "rqcsim/bits.h"
#include "rqcsim/gate_tensor.h"
#include "rqcsim/generator.h"
#include "rqcsim/network.h"
#include "rqcsim/oracle.h"
#include "rqcsim/rng.h"
#include "test_util.h"

namespace rqcsim {
namespace {

using testing::relative_error;

Bits random_bits(std::size_t n, Rng& rng) {
  Bits b(n);
  for (auto& x : b) x = rng.coin();
  return b;
}

TEST(GateTensor, Hadamard) {
  auto h = gate_tensor(GateKind::h);
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(h.data()[0] - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(h.data()[1] - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(h.data()[2] - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(h.data()[3] + s), 0, 1e-15);
}

TEST(GateTensor, SchmidtRanks) {
  EXPECT_EQ(factor_two_qubit(GateKind::cz).rank, 2u);
  EXPECT_EQ(factor_two_qubit(GateKind::iswap).rank, 4u);
}

TEST(GateTensor, FactorsReconstructGate) {
  for (GateKind kind : {GateKind::cz, GateKind::iswap}) {
    auto f = factor_two_qubit(kind);
    auto full = gate_tensor(kind);
    for (std::size_t o0 = 0; o0 < 2; ++o0)
      for (std::size_t o1 = 0; o1 < 2; ++o1)
        for (std::size_t i0 = 0; i0 < 2; ++i0)
          for (std::size_t i1 = 0; i1 < 2; ++i1) {
            cdouble sum = 0;
            for (std::size_t v = 0; v < f.rank; ++v) {
              std::size_t a[] = {v, o0, i0};
              std::size_t b[] = {v, o1, i1};
              sum += f.first.at(a) * f.second.at(b);
            }
            std::size_t idx[] = {o0, o1, i0, i1};
            EXPECT_LT(std::abs(sum - full.at(idx)), 1e-12);
          }
  }
}

TEST(Network, IdentityDepth) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 2), DepthSpec{0}, 1);
  Bits in = bits_from_string("0110");
  auto same = contract_network(build_3d<cdouble>(c, in, fixed_output(in)));
  EXPECT_NEAR(std::abs(same.scalar_value() - cdouble(1)), 0, 1e-14);
  auto other = contract_network(build_3d<cdouble>(c, in, fixed_output(bits_from_string("0111"))));
  EXPECT_NEAR(std::abs(other.scalar_value()), 0, 1e-14);
}

TEST(Network, TwoQubitDepthEightMatchesOracle) {
  Circuit c = generate_rqc(Lattice::rectangular(1, 2), DepthSpec{8}, 4);
  for (std::uint64_t o = 0; o < 4; ++o) {
    Bits in = bits_from_string("10");
    Bits out = bits_from_index(o, 2);
    cdouble exact = exact_amplitude(c, in, out);
    auto net3 = build_3d<cfloat>(c, in, fixed_output(out));
    cdouble got = contract_network(net3).scalar_value();
    EXPECT_LE(std::abs(got - exact), 1e-5);
  }
}

TEST(Network, FourByFourBlockStructure) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{8}, 2);
  Bits in(16, 0);
  auto net = build_3d<cdouble>(c, in, fixed_output(in));
  EXPECT_EQ(net.blocks, 1);
  for (const auto& column : net.tensors) {
    ASSERT_EQ(column.size(), 1u);
    EXPECT_LE(column[0].rank(), 4u);
  }
  auto net2 = contract_time(net, c);
  for (std::size_t p = 0; p < net2.sites.size(); ++p)
    EXPECT_EQ(net2.tensors[p].rank(), c.lattice().neighbors(net2.sites[p]).size());
}

TEST(Network, FourByFourTwoBlocksMatchesOracle) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 3);
  Rng rng(1);
  Bits in = random_bits(16, rng);
  auto net2 = build_2d<cfloat>(c, in);
  for (const auto& [bond, d] : net2.bond_dims) EXPECT_EQ(d, 4u);
  auto state = evolve(c, in);
  for (int k = 0; k < 4; ++k) {
    Bits out = random_bits(16, rng);
    cdouble exact = state.amplitudes()[bits_to_index(out)];
    cdouble got = contract_network(net2, fixed_output(out)).scalar_value();
    EXPECT_LE(relative_error(got, exact, 16), 1e-5);
  }
}

TEST(Network, Bristlecone24StructureAtDepth24) {
  Circuit c = generate_rqc(Lattice::bristlecone(24), DepthSpec{24}, 1);
  auto net = build_2d<cfloat>(c, Bits(24, 0));
  for (const auto& [bond, d] : net.bond_dims) EXPECT_EQ(d, 8u);
  const Lattice& l = c.lattice();
  for (std::size_t p = 0; p < net.sites.size(); ++p) {
    std::size_t bonds = 0;
    for (const auto& label : net.tensors[p].labels()) bonds += label[0] == 'b';
    EXPECT_EQ(bonds, l.neighbors(net.sites[p]).size());
  }
}

TEST(Network, AllRoutesAgreeInDoublePrecision) {
  for (const char* name : {"grid:2x2", "grid:2x3", "grid:3x3"}) {
    for (int t : {5, 8, 13}) {
      Circuit c = generate_rqc(Lattice::by_name(name), DepthSpec{t}, 17);
      const std::size_t n = c.num_qubits();
      Rng rng(t);
      Bits in = random_bits(n, rng);
      Bits out = random_bits(n, rng);
      cdouble exact = exact_amplitude(c, in, out);
      cdouble gate = contract_gate_network<cdouble>(c, in, fixed_output(out)).scalar_value();
      cdouble three = contract_network(build_3d<cdouble>(c, in, fixed_output(out))).scalar_value();
      cdouble two = contract_network(build_2d<cdouble>(c, in), fixed_output(out)).scalar_value();
      EXPECT_LE(relative_error(gate, exact, n), 1e-10) << name << " t=" << t;
      EXPECT_LE(relative_error(three, exact, n), 1e-10) << name << " t=" << t;
      EXPECT_LE(relative_error(two, exact, n), 1e-10) << name << " t=" << t;
    }
  }
}

TEST(Network, OpenOutputsGiveFullState) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 3), DepthSpec{10}, 6);
  Bits in = bits_from_string("010011");
  auto state = evolve(c, in);
  auto full = contract_network(build_2d<cdouble>(c, in), all_open(6));
  ASSERT_EQ(full.size(), 64u);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_LT(std::abs(full.data()[i] - state.amplitudes()[i]), 1e-12);
}

TEST(Network, IswapCircuitMatchesOracle) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 3), DepthSpec{8}, 6, GateKind::iswap);
  Bits in = bits_from_string("100101");
  auto net = build_2d<cdouble>(c, in);
  for (const auto& [bond, d] : net.bond_dims) EXPECT_EQ(d, 4u);
  for (std::uint64_t o : {0u, 5u, 33u, 63u}) {
    Bits out = bits_from_index(o, 6);
    EXPECT_LE(relative_error(contract_network(net, fixed_output(out)).scalar_value(), exact_amplitude(c, in, out), 6),
              1e-10);
  }
}

TEST(Network, LayoutIndependentOfSeed) {
  Lattice l = Lattice::rectangular(3, 4);
  auto a = build_2d<cfloat>(generate_rqc(l, DepthSpec{12}, 1), Bits(12, 0));
  auto b = build_2d<cfloat>(generate_rqc(l, DepthSpec{12}, 2), Bits(12, 1));
  EXPECT_EQ(a.sites, b.sites);
  EXPECT_EQ(a.bond_dims, b.bond_dims);
  for (std::size_t p = 0; p < a.tensors.size(); ++p) {
    EXPECT_EQ(a.tensors[p].labels(), b.tensors[p].labels());
    EXPECT_EQ(a.tensors[p].dims(), b.tensors[p].dims());
  }
}

TEST(Network, Bristlecone72FoldsCorners) {
  Circuit c = generate_rqc(Lattice::bristlecone(72), DepthSpec{8}, 1);
  auto net = build_2d<cfloat>(c, Bits(72, 0));
  EXPECT_EQ(net.sites.size(), 70u);
  std::size_t members = 0;
  for (const auto& m : net.members) members += m.size();
  EXPECT_EQ(members, 72u);
}

TEST(Network, BitLengthMismatchRejected) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 2), DepthSpec{4}, 1);
  EXPECT_THROW(build_3d<cfloat>(c, Bits(3, 0), all_open(4)), std::invalid_argument);
  EXPECT_THROW(build_3d<cfloat>(c, Bits(4, 0), all_open(5)), std::invalid_argument);
}

}  // namespace
}  // namespace rqcsim
