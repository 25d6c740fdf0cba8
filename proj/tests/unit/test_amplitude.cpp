#include <gtest/gtest.h>

#include <cstring>
#include <numeric>
#include <set>

#include "rqcsim/amplitude_engine.h"
#include "rqcsim/bits.h"
#include "rqcsim/builtin_plans.h"
#include "rqcsim/executor.h"
#include "rqcsim/generator.h"
#include "rqcsim/network.h"
#include "rqcsim/oracle.h"
#include "rqcsim/rng.h"
#include "test_util.h"

namespace rqcsim {
namespace {

using testing::relative_error;

EngineOptions double_engine() {
  EngineOptions o;
  o.double_precision = true;
  return o;
}

bool same(cdouble a, cdouble b) { return std::memcmp(&a, &b, sizeof(a)) == 0; }

// Every path's full output state, flattened by bits_to_index.
std::vector<std::vector<cdouble>> path_states(const Circuit& c, const ContractionPlan& plan, const Bits& in) {
  auto net = build_2d<cdouble>(c, in);
  PlanExecutor<cdouble> ex(net, plan);
  auto parts = ex.contributions(ex.paths(), {all_open(c.num_qubits())});
  std::vector<std::vector<cdouble>> out;
  for (const auto& t : parts[0]) out.emplace_back(t.data().begin(), t.data().end());
  return out;
}

cdouble inner(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

TEST(FidelitySpec, Validation) {
  EXPECT_NO_THROW(FidelitySpec::exact().validate());
  EXPECT_NO_THROW(FidelitySpec::path_fraction(0.5, 1).validate());
  EXPECT_THROW(FidelitySpec::path_fraction(0.0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(FidelitySpec::path_fraction(1.5, 1).validate(), std::invalid_argument);
  EXPECT_THROW(FidelitySpec::mixed(-0.1, 1).validate(), std::invalid_argument);
  FidelitySpec bad{FidelityMode::exact, 0.5, 0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(AmplitudeEngine, IdentityDepth) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 3), DepthSpec{0}, 1);
  Bits in = bits_from_string("011010");
  AmplitudeEngine e(c, builtin_plan(c), in, double_engine());
  EXPECT_NEAR(std::abs(e.amplitude(in).value - cdouble(1)), 0, 1e-12);
  EXPECT_NEAR(std::abs(e.amplitude(bits_from_string("011011")).value), 0, 1e-12);
}

TEST(AmplitudeEngine, FourByFourMatchesOracle) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 9);
  Bits in = bits_from_index(4321, 16);
  auto state = evolve(c, in);
  AmplitudeEngine single(c, builtin_plan(c), in);
  AmplitudeEngine dbl(c, builtin_plan(c), in, double_engine());
  Rng rng(1);
  for (int k = 0; k < 8; ++k) {
    Bits out = bits_from_index(rng.below(65536), 16);
    cdouble exact = state.amplitudes()[bits_to_index(out)];
    EXPECT_LE(relative_error(single.amplitude(out).value, exact, 16), 1e-5);
    EXPECT_LE(relative_error(dbl.amplitude(out).value, exact, 16), 1e-10);
  }
}

TEST(AmplitudeEngine, QuarterFractionUsesOneOfFourPaths) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 3);
  ContractionPlan plan =
      parse_plan("cut 5-6\nloop 5-6\ncontract 0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 -> X\noutput X\n");
  Bits in(16, 0);
  AmplitudeEngine e(c, plan, in, double_engine());
  ASSERT_EQ(e.total_paths(), 4u);
  Bits out = bits_from_index(777, 16);
  auto all = e.path_contributions(out, e.select_paths(FidelitySpec::exact()));
  ASSERT_EQ(all.size(), 4u);
  std::set<std::size_t> chosen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto spec = FidelitySpec::path_fraction(0.25, seed);
    auto paths = e.select_paths(spec);
    ASSERT_EQ(paths.size(), 1u);
    AmplitudeResult r = e.amplitude(out, spec);
    EXPECT_EQ(r.stats.paths_used, 1u);
    EXPECT_EQ(r.stats.total_paths, 4u);
    EXPECT_EQ(r.stats.path_norms.size(), 1u);
    chosen.insert(paths[0][0]);
    EXPECT_TRUE(same(r.value, all[paths[0][0]]));
  }
  EXPECT_GT(chosen.size(), 1u);

  // Averaged over the four single-path choices, the path-state norm is f.
  auto states = path_states(c, plan, in);
  double mean_norm = 0;
  for (const auto& s : states) mean_norm += inner(s, s).real() / 4;
  EXPECT_NEAR(mean_norm, 0.25, 0.25 * 0.25);
}

TEST(AmplitudeEngine, ManyOutputsMatchSingleCalls) {
  Circuit c = generate_rqc(Lattice::rectangular(3, 4), DepthSpec{16}, 4);
  Bits in(12, 1);
  AmplitudeEngine e(c, builtin_plan(c), in, double_engine());
  std::vector<Bits> outs;
  Rng rng(2);
  for (int i = 0; i < 6; ++i) outs.push_back(bits_from_index(rng.below(4096), 12));
  auto many = e.amplitudes(outs);
  for (std::size_t i = 0; i < outs.size(); ++i) EXPECT_TRUE(same(many[i].value, e.amplitude(outs[i]).value));
}

TEST(AmplitudeBatch, EntriesEqualIndividualAmplitudes) {
  Circuit c = generate_rqc(Lattice::bristlecone(24), DepthSpec{24}, 5);
  Bits in(24, 0);
  AmplitudeEngine e(c, builtin_plan(c), in, double_engine());
  Bits s_ab(e.ab_positions().size());
  Rng rng(3);
  for (auto& b : s_ab) b = rng.coin();
  AmplitudeBatch batch = e.amplitude_batch(s_ab, 32, 11);
  ASSERT_EQ(batch.size(), 32u);
  std::set<Bits> distinct(batch.s_c.begin(), batch.s_c.end());
  EXPECT_EQ(distinct.size(), 32u);
  EXPECT_EQ(batch.c_sites, e.c_sites());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Bits full = e.join(s_ab, batch.s_c[i]);
    cdouble single = e.amplitude(full).value;
    EXPECT_LE(std::abs(batch.amplitudes[i] - single), 1e-6 * std::pow(2.0, -12));
    EXPECT_TRUE(same(batch.amplitudes[i], single));
    EXPECT_DOUBLE_EQ(batch.probabilities[i], std::norm(batch.amplitudes[i]));
  }
}

TEST(AmplitudeBatch, SingleEntryEqualsAmplitude) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 6);
  Bits in(16, 0);
  AmplitudeEngine e(c, builtin_plan(c), in, double_engine());
  Bits s_ab(e.ab_positions().size(), 1);
  Bits s_c(e.c_positions().size(), 0);
  s_c[0] = 1;
  AmplitudeBatch b = e.amplitude_batch(s_ab, std::vector<Bits>{s_c});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(same(b.amplitudes[0], e.amplitude(e.join(s_ab, s_c)).value));
}

TEST(AmplitudeBatch, PathFractionBatchesUseSamePaths) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 7);
  Bits in(16, 0);
  AmplitudeEngine e(c, builtin_plan(c), in, double_engine());
  auto spec = FidelitySpec::path_fraction(0.25, 9);
  Bits s_ab(e.ab_positions().size(), 0);
  AmplitudeBatch b = e.amplitude_batch(s_ab, 8, 1, spec);
  EXPECT_EQ(b.stats.paths_used, 4u);
  for (std::size_t i = 0; i < b.size(); ++i)
    EXPECT_TRUE(same(b.amplitudes[i], e.amplitude(e.join(s_ab, b.s_c[i]), spec).value));
}

TEST(AmplitudeBatch, RejectsBadRequests) {
  Circuit c = generate_rqc(Lattice::rectangular(2, 3), DepthSpec{8}, 1);
  AmplitudeEngine e(c, builtin_plan(c), Bits(6, 0));
  Bits s_ab(e.ab_positions().size(), 0);
  const std::size_t room = std::size_t{1} << e.c_positions().size();
  EXPECT_THROW(e.amplitude_batch(s_ab, room + 1, 1), std::invalid_argument);
  EXPECT_THROW(e.check_c_region({0}), std::invalid_argument);
  EXPECT_NO_THROW(e.check_c_region(e.c_sites()));
  EXPECT_THROW(e.amplitude(Bits(5, 0)), std::invalid_argument);
}

TEST(RandomSuffixes, DistinctAndSeeded) {
  auto a = random_suffixes(6, 40, 3);
  auto b = random_suffixes(6, 40, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<Bits>(a.begin(), a.end()).size(), 40u);
  EXPECT_THROW(random_suffixes(3, 9, 1), std::invalid_argument);
}

TEST(MixedStateSource, Branches) {
  MixedStateSource always(1.0, 1);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(always.exact_branch());

  MixedStateSource never(0.0, 2);
  std::vector<int> ones(16, 0);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    EXPECT_FALSE(never.exact_branch());
    Bits b = never.uniform_bits(16);
    for (int q = 0; q < 16; ++q) ones[q] += b[q];
  }
  const double sigma = std::sqrt(draws * 0.25);
  for (int q = 0; q < 16; ++q) EXPECT_LT(std::abs(ones[q] - draws / 2.0), 3 * sigma);

  MixedStateSource half(0.5, 3);
  int exact = 0;
  for (int i = 0; i < 100000; ++i) exact += half.exact_branch();
  EXPECT_NEAR(exact / 100000.0, 0.5, 0.005);
}

class PathStateTest : public ::testing::Test {
 protected:
  // 12 qubits, two cuts of dimension 8: 64 paths.
  void SetUp() override {
    circuit = generate_rqc(Lattice::rectangular(3, 4), DepthSpec{24}, 12);
    plan = builtin_plan(circuit);
    in = Bits(12, 0);
    states = path_states(circuit, plan, in);
    auto exact = evolve(circuit, in);
    psi.assign(exact.amplitudes().begin(), exact.amplitudes().end());
  }
  Circuit circuit;
  ContractionPlan plan;
  Bits in;
  std::vector<std::vector<cdouble>> states;
  std::vector<cdouble> psi;
};

TEST_F(PathStateTest, NormsAddUp) {
  ASSERT_EQ(states.size(), 64u);
  double total = 0;
  for (const auto& s : states) total += inner(s, s).real();
  EXPECT_NEAR(total, 1.0, 0.05);
}

TEST_F(PathStateTest, PathStatesNearlyOrthogonal) {
  const std::size_t p = states.size();
  std::vector<double> norm(p);
  for (std::size_t i = 0; i < p; ++i) norm[i] = inner(states[i], states[i]).real();
  double mean_mutual = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      mean_mutual += std::norm(inner(states[i], states[j])) / (norm[i] * norm[j]);
      ++pairs;
    }
  mean_mutual /= static_cast<double>(pairs);
  EXPECT_LT(mean_mutual, 0.1 / static_cast<double>(p));
}

TEST_F(PathStateTest, FractionFidelityAveragesToTarget) {
  Circuit c = circuit;
  AmplitudeEngine e(c, plan, in, double_engine());
  const double f = 0.125;
  double mean_fidelity = 0;
  const int subsets = 200;
  for (int s = 0; s < subsets; ++s) {
    auto paths = e.select_paths(FidelitySpec::path_fraction(f, static_cast<std::uint64_t>(s)));
    ASSERT_EQ(paths.size(), 8u);
    std::vector<cdouble> approx(psi.size(), 0);
    for (const Path& path : paths) {
      std::uint64_t index = 0;
      for (std::size_t k = 0; k < path.size(); ++k) index = index * 8 + path[k];
      for (std::size_t i = 0; i < approx.size(); ++i) approx[i] += states[index][i];
    }
    mean_fidelity += std::norm(inner(psi, approx)) / inner(approx, approx).real() / subsets;
  }
  EXPECT_NEAR(mean_fidelity, f, 0.25 * f);
}

TEST_F(PathStateTest, StatsEstimateFidelity) {
  AmplitudeEngine e(circuit, plan, in, double_engine());
  Bits s_ab(e.ab_positions().size(), 0);
  const std::size_t n_c = std::size_t{1} << e.c_positions().size();
  double estimate = 0;
  for (std::uint64_t ab = 0; ab < 4; ++ab) {
    for (std::size_t k = 0; k < s_ab.size(); ++k) s_ab[k] = (ab >> k) & 1;
    AmplitudeBatch b = e.amplitude_batch(s_ab, n_c, ab, FidelitySpec::path_fraction(0.25, ab));
    EXPECT_EQ(b.stats.paths_used, 16u);
    EXPECT_EQ(b.stats.path_norms.size(), 16u);
    estimate += b.stats.f_achieved_estimate / 4;
  }
  EXPECT_NEAR(estimate, 0.25, 0.1);
}

}  // namespace
}  // namespace rqcsim
