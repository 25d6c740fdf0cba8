#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rqcsim/circuit.h"
#include "rqcsim/generator.h"
#include "rqcsim/partition_cost.h"

namespace rqcsim {
namespace {

Circuit rqc(const char* lattice, int t) { return generate_rqc(Lattice::by_name(lattice), DepthSpec{t}, 1); }

TEST(PartitionFormulas, SmallestBipartition) { EXPECT_DOUBLE_EQ(bipartition_complexity(0, 1, 1), 2.0); }

TEST(PartitionFormulas, BipartitionMonotoneInAlpha) {
  for (int a = 0; a < 40; a += 7)
    for (auto [na, nb] : {std::pair{10, 12}, {30, 30}, {3, 40}})
      EXPECT_NEAR(bipartition_complexity(a + 1, na, nb) - bipartition_complexity(a, na, nb), 1.0, 1e-12);
}

TEST(PartitionFormulas, BipartitionSymmetric) {
  for (auto [a, na, nb] : {std::tuple{5, 3, 9}, {32, 32, 32}, {17, 20, 40}})
    EXPECT_DOUBLE_EQ(bipartition_complexity(a, na, nb), bipartition_complexity(a, nb, na));
}

TEST(PartitionFormulas, MultiPartFormulasGrowWithCuts) {
  double base = tripartition_complexity(10, 5, 5, 20, 10, 10);
  EXPECT_GT(tripartition_complexity(11, 5, 5, 20, 10, 10), base);
  double q = quadpartition_complexity(5, 5, 5, 5, 10, 10, 10, 10);
  EXPECT_GT(quadpartition_complexity(6, 5, 5, 5, 10, 10, 10, 10), q);
}

TEST(QubitComplexity, EightByEight) {
  Circuit c = rqc("grid:8x8", 32);
  PartitionResult best = best_partition(c, "bi");
  EXPECT_DOUBLE_EQ(best.cost, 65.0);
  EXPECT_EQ(best.spec.alpha[0][1], 32);
}

TEST(QubitComplexity, SevenBySevenSlightlyOver63) {
  PartitionResult best = best_partition(rqc("grid:7x7", 40), "bi");
  EXPECT_GT(best.cost, 63.0);
  EXPECT_LT(best.cost, 64.0);
}

TEST(QubitComplexity, SevenByEight) { EXPECT_DOUBLE_EQ(best_partition(rqc("grid:7x8", 40), "bi").cost, 64.0); }

TEST(QubitComplexity, Bristlecone60BestIsBipartition) {
  Circuit c = rqc("bristlecone-60", 32);
  PartitionResult bi = best_partition(c, "bi");
  EXPECT_DOUBLE_EQ(bi.cost, 71.0);
  EXPECT_EQ(bi.spec.alpha[0][1], 40);
  EXPECT_LT(bi.cost, best_partition(c, "tri").cost);
  EXPECT_LT(bi.cost, best_partition(c, "quad").cost);
  for (const auto& r : partition_family(c, "tri")) EXPECT_GE(r.spec.d, 1);
}

TEST(QubitComplexity, AlphaComesFromCircuit) {
  Circuit c = rqc("grid:4x4", 16);
  std::vector<int> top, bottom;
  for (int id : c.lattice().site_ids()) (c.lattice().coord(id).row < 2 ? top : bottom).push_back(id);
  PartitionSpec spec = make_partition(c, {top, bottom}, "bi", "row<2");
  EXPECT_EQ(spec.alpha[0][1], cz_cut_count(c, top, bottom));
  EXPECT_EQ(spec.alpha[0][1], cz_count_between(c, top, bottom));
  EXPECT_DOUBLE_EQ(qubit_complexity(spec), bipartition_complexity(spec.alpha[0][1], 8, 8));
}

TEST(QubitComplexity, TripartitionRelabelsLargestFirst) {
  Circuit c = rqc("grid:4x4", 16);
  std::vector<int> a, b, d;
  for (int id : c.lattice().site_ids()) {
    auto s = c.lattice().coord(id);
    (s.row < 1 ? a : s.row < 2 ? b : d).push_back(id);
  }
  PartitionSpec small_first = make_partition(c, {a, b, d}, "tri");
  PartitionSpec large_first = make_partition(c, {d, b, a}, "tri");
  EXPECT_DOUBLE_EQ(qubit_complexity(small_first), qubit_complexity(large_first));
}

TEST(QubitComplexity, RejectsBadPartitions) {
  Circuit c = rqc("grid:4x4", 16);
  const auto& ids = c.lattice().site_ids();
  EXPECT_THROW(qubit_complexity(make_partition(c, {ids})), std::invalid_argument);
  std::vector<std::vector<int>> quads(4);
  for (int id : ids) {
    auto s = c.lattice().coord(id);
    quads[(s.row < 2 ? 0 : 2) + (s.col < 2 ? 0 : 1)].push_back(id);
  }
  // Diagonal order puts neighbors across A-C and B-D.
  EXPECT_THROW(qubit_complexity(make_partition(c, {quads[0], quads[1], quads[2], quads[3]})), std::invalid_argument);
  EXPECT_NO_THROW(qubit_complexity(make_partition(c, {quads[0], quads[1], quads[3], quads[2]})));
  EXPECT_THROW(make_partition(c, {{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST(PartitionFamily, CsvListsEveryCandidate) {
  Circuit c = rqc("grid:6x6", 16);
  auto family = partition_family(c, "bi");
  ASSERT_FALSE(family.empty());
  std::string csv = partition_csv(family);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), family.size() + 1);
  for (const auto& r : family) {
    auto sizes = r.spec.sizes();
    EXPECT_LE(4 * std::abs(sizes[0] - sizes[1]), 36);
  }
}

}  // namespace
}  // namespace rqcsim
