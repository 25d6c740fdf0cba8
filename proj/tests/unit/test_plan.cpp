#include <gtest/gtest.h>

#include <cstring>
#include <set>

#include "rqcsim/bits.h"
#include "rqcsim/builtin_plans.h"
#include "rqcsim/errors.h"
#include "rqcsim/executor.h"
#include "rqcsim/generator.h"
#include "rqcsim/network.h"
#include "rqcsim/oracle.h"
#include "rqcsim/plan.h"
#include "rqcsim/rng.h"
#include "test_util.h"

namespace rqcsim {
namespace {

using testing::relative_error;

// Chain 0-1-2-3 with every bond of dimension d.
NetworkShape chain_shape(std::size_t d01, std::size_t d12 = 2, std::size_t d23 = 2) {
  NetworkShape s;
  s.nodes = {0, 1, 2, 3};
  s.members = {{0}, {1}, {2}, {3}};
  s.bond_dims = {{{0, 1}, d01}, {{1, 2}, d12}, {{2, 3}, d23}};
  return s;
}

Bits random_bits(std::size_t n, Rng& rng) {
  Bits b(n);
  for (auto& x : b) x = rng.coin();
  return b;
}

TEST(PlanText, RoundTrip) {
  const char* text =
      "# two cuts\n"
      "cut 1-2 values 0,3\n"
      "cut 5-6\n"
      "batch 7 8\n"
      "contract 0 1 -> A reuse:global\n"
      "loop 1-2\n"
      "contract A 2 -> B reuse:outer\n"
      "loop 5-6\n"
      "contract B 3 -> C\n"
      "output C\n";
  ContractionPlan p = parse_plan(text);
  ASSERT_EQ(p.cuts.size(), 2u);
  EXPECT_EQ(p.cuts[0].values, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(p.batch_sites, (std::vector<int>{7, 8}));
  ASSERT_EQ(p.steps.size(), 5u);
  EXPECT_EQ(p.steps[0].reuse, Reuse::global);
  EXPECT_EQ(p.steps[2].reuse, Reuse::outer);
  EXPECT_EQ(p.steps[1].kind, PlanStep::Kind::loop);
  EXPECT_EQ(p.output, "C");
  ContractionPlan back = parse_plan(write_plan(p));
  EXPECT_EQ(write_plan(back), write_plan(p));
}

TEST(PlanText, ParseErrorsCarryLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_plan(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("contract 0 -> A\nfrobnicate\n"), 2u);
  EXPECT_EQ(line_of("cut 1\n"), 1u);
  EXPECT_EQ(line_of("cut 1-2\ncut 2-1\n"), 2u);
  EXPECT_EQ(line_of("\n\nloop 1-2\n"), 3u);
  EXPECT_EQ(line_of("contract 0 1 A\n"), 1u);
  EXPECT_EQ(line_of("contract 0 -> 5\n"), 1u);
  EXPECT_EQ(line_of("contract 0 -> A reuse:sometimes\n"), 1u);
  EXPECT_EQ(line_of("cut 1-2 values\n"), 1u);
}

TEST(PlanAnalysis, RejectsStructuralErrors) {
  NetworkShape s = chain_shape(2);
  auto bad = [&](const std::string& text) { return parse_plan(text); };
  EXPECT_THROW(analyze_plan(bad("contract 0 1 2 -> X\noutput X\n"), s), std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("contract 0 1 2 3 1 -> X\noutput X\n"), s), std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("contract 0 1 -> X\ncontract X Y 2 3 -> Z\noutput Z\n"), s), std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("cut 0-2\nloop 0-2\ncontract 0 1 2 3 -> X\noutput X\n"), s), std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("cut 1-2\ncontract 0 1 2 3 -> X\noutput X\n"), s), std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("cut 1-2\nloop 1-2\ncontract 0 1 -> A reuse:global\ncontract A 2 3 -> X\noutput X\n"), s),
               std::invalid_argument);
  EXPECT_THROW(analyze_plan(bad("cut 1-2 values 5\nloop 1-2\ncontract 0 1 2 3 -> X\noutput X\n"), s),
               std::invalid_argument);
  EXPECT_NO_THROW(analyze_plan(bad("cut 1-2\ncontract 0 -> A reuse:global\nloop 1-2\ncontract A 1 2 3 -> X\noutput X\n"), s));
}

TEST(Paths, FullEnumerationIsDistinct) {
  NetworkShape s = chain_shape(16, 2, 16);
  ContractionPlan p = parse_plan("cut 0-1\ncut 2-3\nloop 0-1\nloop 2-3\ncontract 0 1 2 3 -> X\noutput X\n");
  EXPECT_EQ(total_paths(p, s), 256u);
  auto paths = enumerate_paths(p, s, 1.0, 0);
  ASSERT_EQ(paths.size(), 256u);
  std::set<Path> distinct(paths.begin(), paths.end());
  EXPECT_EQ(distinct.size(), 256u);
}

TEST(Paths, FractionCounts) {
  EXPECT_EQ(fraction_path_count(21.0 / 4096.0, 4096), 21u);
  EXPECT_EQ(fraction_path_count(1.0 / 65536.0, 65536), 1u);
  EXPECT_EQ(fraction_path_count(0.3, 10), 3u);
  EXPECT_EQ(fraction_path_count(0.31, 10), 4u);
  EXPECT_EQ(fraction_path_count(1.0, 7), 7u);
}

TEST(Paths, FractionSelectionDeterministicAndDistinct) {
  NetworkShape s = chain_shape(16, 2, 16);
  ContractionPlan p = parse_plan("cut 0-1\ncut 2-3\nloop 0-1\nloop 2-3\ncontract 0 1 2 3 -> X\noutput X\n");
  auto a = enumerate_paths(p, s, 0.1, 5);
  auto b = enumerate_paths(p, s, 0.1, 5);
  auto c = enumerate_paths(p, s, 0.1, 6);
  EXPECT_EQ(a.size(), 26u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(std::set<Path>(a.begin(), a.end()).size(), a.size());
  EXPECT_THROW(enumerate_paths(p, s, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(enumerate_paths(p, s, 1.5, 1), std::invalid_argument);
}

TEST(Paths, RestrictedValues) {
  NetworkShape s = chain_shape(8);
  ContractionPlan p = parse_plan("cut 0-1 values 1,6\nloop 0-1\ncontract 0 1 2 3 -> X\noutput X\n");
  EXPECT_EQ(total_paths(p, s), 2u);
  auto paths = enumerate_paths(p, s, 1.0, 0);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0], Path{1});
  EXPECT_EQ(paths[1], Path{6});
}

TEST(Cost, TwoByTwoMatrixProductIs64) {
  NetworkShape s = chain_shape(2);
  ContractionPlan p = parse_plan("contract 1 2 -> M\ncontract 0 M 3 -> X\noutput X\n");
  CostEstimate c = estimate_cost(p, s);
  ASSERT_FALSE(c.steps.empty());
  EXPECT_DOUBLE_EQ(c.steps[0].flops, 64.0);
  EXPECT_DOUBLE_EQ(c.steps[0].result_entries, 4.0);
}

TEST(Cost, DoublingCutDimensionDoublesTotal) {
  ContractionPlan p = parse_plan("cut 1-2\nloop 1-2\ncontract 0 1 2 3 -> X\noutput X\n");
  CostEstimate small = estimate_cost(p, chain_shape(4, 4, 4));
  CostEstimate big = estimate_cost(p, chain_shape(4, 8, 4));
  EXPECT_EQ(big.paths, 2 * small.paths);
  EXPECT_DOUBLE_EQ(big.total_flops, 2 * small.total_flops);
  EXPECT_DOUBLE_EQ(small.total_flops, static_cast<double>(small.paths) * small.flops_per_path);
  EXPECT_GE(small.peak_tensor_entries, 1.0);
}

TEST(BuiltinPlans, Bristlecone70) {
  Circuit c = generate_rqc(Lattice::bristlecone(70), DepthSpec{32}, 1);
  ContractionPlan p = builtin_plan(c);
  NetworkShape s = network_shape(c);
  ASSERT_EQ(p.cuts.size(), 4u);
  for (const auto& cut : p.cuts) EXPECT_EQ(s.bond_dim(cut.a, cut.b), 16u);
  CostEstimate cost = estimate_cost(p, s);
  EXPECT_EQ(cost.paths, 65536u);
  EXPECT_DOUBLE_EQ(cost.peak_tensor_entries, std::pow(2.0, 28));
}

TEST(BuiltinPlans, BristleconeCutCounts) {
  for (auto [n, cuts] : {std::pair{60, 3u}, {48, 2u}, {64, 2u}}) {
    Circuit c = generate_rqc(Lattice::bristlecone(n), DepthSpec{32}, 1);
    ContractionPlan p = builtin_plan(c);
    NetworkShape s = network_shape(c);
    EXPECT_EQ(p.cuts.size(), cuts) << n;
    for (const auto& cut : p.cuts) EXPECT_EQ(s.bond_dim(cut.a, cut.b), 16u) << n;
  }
}

TEST(BuiltinPlans, Bristlecone60IsSixteenTimesBristlecone64) {
  Circuit c60 = generate_rqc(Lattice::bristlecone(60), DepthSpec{32}, 1);
  Circuit c64 = generate_rqc(Lattice::bristlecone(64), DepthSpec{32}, 1);
  CostEstimate a = estimate_cost(builtin_plan(c60), network_shape(c60));
  CostEstimate b = estimate_cost(builtin_plan(c64), network_shape(c64));
  EXPECT_EQ(a.paths, 4096u);
  EXPECT_EQ(a.paths, 16 * b.paths);
  double ratio = a.total_flops / b.total_flops;
  EXPECT_GT(ratio, 8.0);
  EXPECT_LT(ratio, 32.0);
}

TEST(BuiltinPlans, SevenBySevenDepthForty) {
  Circuit c = generate_rqc(Lattice::rectangular(7, 7), DepthSpec{40}, 1);
  ContractionPlan p = builtin_plan(c);
  NetworkShape s = network_shape(c);
  ASSERT_EQ(p.cuts.size(), 2u);
  for (const auto& cut : p.cuts) EXPECT_EQ(s.bond_dim(cut.a, cut.b), 32u);
  CostEstimate cost = estimate_cost(p, s);
  EXPECT_EQ(cost.paths, 1024u);
  for (const char* region : {"A", "B", "C", "D"}) {
    auto it = std::find_if(cost.steps.begin(), cost.steps.end(), [&](const StepCost& st) { return st.name == region; });
    ASSERT_NE(it, cost.steps.end()) << region;
    EXPECT_DOUBLE_EQ(it->result_entries, std::pow(2.0, 30)) << region;
  }
  std::set<std::string> global;
  for (const auto& st : p.steps)
    if (st.reuse == Reuse::global) global.insert(st.output);
  EXPECT_EQ(global, (std::set<std::string>{"A", "pB", "pC", "ppD"}));
}

TEST(BuiltinPlans, MemoryBudgetGate) {
  Circuit c = generate_rqc(Lattice::bristlecone(70), DepthSpec{32}, 1);
  EXPECT_THROW(builtin_plan(c, 1e6, 8), ResourceError);
  EXPECT_NO_THROW(builtin_plan(c, 8.0 * std::pow(2.0, 28), 8));
}

TEST(BuiltinPlans, AutoPlanFitsBudget) {
  Circuit c = generate_rqc(Lattice::bristlecone(72), DepthSpec{8}, 1);
  ContractionPlan p = builtin_plan(c, 8.0 * 4096, 8);
  EXPECT_EQ(p.name, "auto");
  EXPECT_LE(estimate_cost(p, network_shape(c)).peak_tensor_entries, 4096.0);
}

// Sum over all paths against the uncut contraction and the oracle, for
// plans with one to three cuts.
TEST(Executor, CutIdentity) {
  struct Case {
    const char* lattice;
    int t;
    double max_entries;
  };
  for (Case k : {Case{"grid:2x2", 8, 0}, Case{"grid:1x2", 16, 0}, Case{"grid:3x4", 16, 0}, Case{"grid:4x4", 8, 0},
                 Case{"grid:2x3", 16, 16}, Case{"grid:3x3", 16, 16}, Case{"grid:3x3", 12, 4}}) {
    Circuit c = generate_rqc(Lattice::by_name(k.lattice), DepthSpec{k.t}, 21);
    const std::size_t n = c.num_qubits();
    Rng rng(k.t);
    Bits in = random_bits(n, rng);
    Bits out = random_bits(n, rng);
    auto net = build_2d<cdouble>(c, in);
    ContractionPlan plan = k.max_entries > 0 ? auto_plan(c, k.max_entries, 3) : builtin_plan(c);
    ASSERT_GE(plan.cuts.size(), 1u) << k.lattice;
    ASSERT_LE(plan.cuts.size(), 3u) << k.lattice;
    PlanExecutor<cdouble> ex(net, plan);
    cdouble total = ex.sum(ex.paths(), {fixed_output(out)})[0].scalar_value();
    cdouble uncut = contract_network(net, fixed_output(out)).scalar_value();
    EXPECT_LE(relative_error(total, uncut, n), 1e-10) << k.lattice;
    EXPECT_LE(relative_error(total, exact_amplitude(c, in, out), n), 1e-10) << k.lattice;
  }
}

TEST(Executor, ReuseNeverChangesResults) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 5), DepthSpec{16}, 2);
  Bits in(20, 0);
  auto net = build_2d<cdouble>(c, in);
  ExecOptions on, off;
  off.reuse = false;
  PlanExecutor<cdouble> a(net, builtin_plan(c), on);
  PlanExecutor<cdouble> b(net, builtin_plan(c), off);
  Rng rng(3);
  std::vector<OutputPattern> outs;
  for (int i = 0; i < 3; ++i) outs.push_back(fixed_output(random_bits(20, rng)));
  auto ca = a.contributions(a.paths(), outs);
  auto cb = b.contributions(b.paths(), outs);
  for (std::size_t o = 0; o < outs.size(); ++o)
    for (std::size_t p = 0; p < ca[o].size(); ++p) {
      cdouble x = ca[o][p].scalar_value(), y = cb[o][p].scalar_value();
      EXPECT_EQ(0, std::memcmp(&x, &y, sizeof(x)));
    }
}

TEST(Executor, DeterministicPerPath) {
  Circuit c = generate_rqc(Lattice::bristlecone(24), DepthSpec{16}, 4);
  Bits in(24, 0);
  Bits out = bits_from_index(123457, 24);
  auto net = build_2d<cdouble>(c, in);
  PlanExecutor<cdouble> ex(net, builtin_plan(c));
  for (const Path& p : ex.paths()) {
    cdouble x = ex.run_path(p, fixed_output(out)).scalar_value();
    cdouble y = ex.run_path(p, fixed_output(out)).scalar_value();
    EXPECT_EQ(0, std::memcmp(&x, &y, sizeof(x)));
  }
}

TEST(Executor, OpenOutputsSortedBySite) {
  Circuit c = generate_rqc(Lattice::rectangular(3, 3), DepthSpec{8}, 5);
  Bits in(9, 0);
  auto net = build_2d<cdouble>(c, in);
  PlanExecutor<cdouble> ex(net, builtin_plan(c));
  OutputPattern pattern = fixed_output(Bits(9, 0));
  pattern[2] = pattern[7] = -1;
  Tensor<cdouble> t = ex.sum(ex.paths(), {pattern})[0];
  ASSERT_EQ(t.labels(), (std::vector<std::string>{output_label(2), output_label(7)}));
  auto state = evolve(c, in);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      Bits out(9, 0);
      out[2] = static_cast<std::uint8_t>(a);
      out[7] = static_cast<std::uint8_t>(b);
      std::size_t idx[] = {a, b};
      EXPECT_LT(std::abs(t.at(idx) - state.amplitudes()[bits_to_index(out)]), 1e-12);
    }
}

TEST(Executor, MemoryBudgetNamesStep) {
  Circuit c = generate_rqc(Lattice::rectangular(4, 4), DepthSpec{16}, 1);
  auto net = build_2d<cfloat>(c, Bits(16, 0));
  ExecOptions opts;
  opts.memory_budget_bytes = 64;
  try {
    PlanExecutor<cfloat> ex(net, builtin_plan(c), opts);
    FAIL() << "expected a resource error";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

}  // namespace
}  // namespace rqcsim
