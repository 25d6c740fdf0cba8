#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rqcsim/circuit.h"

namespace rqcsim {

// A fixed bond whose values are summed outside the contraction.
struct CutSpec {
  int a = 0;
  int b = 0;
  // Restriction to a subset of bond values; empty means all of them.
  std::vector<std::size_t> values;

  std::string name() const { return std::to_string(a) + "-" + std::to_string(b); }
};

enum class Reuse { none, outer, global };

struct PlanStep {
  enum class Kind { contract, loop };
  Kind kind = Kind::contract;
  // contract: tokens are site ids or names of earlier intermediates,
  // folded left to right into `output`.
  std::vector<std::string> inputs;
  std::string output;
  Reuse reuse = Reuse::none;
  // loop: index into ContractionPlan::cuts.
  int cut = -1;
  std::size_t line = 0;
};

// Plan text format, '#' comments:
//   cut <a>-<b> [values v0,v1,...]
//   batch <site> <site> ...
//   loop <a>-<b>
//   contract <token> <token> ... -> <name> [reuse:outer|reuse:global]
//   output <name>
struct ContractionPlan {
  std::vector<CutSpec> cuts;
  std::vector<int> batch_sites;
  std::vector<PlanStep> steps;
  std::string output;
  std::string name;

  int find_cut(int a, int b) const;
};

ContractionPlan parse_plan(std::string_view text, std::string name = "plan");
std::string write_plan(const ContractionPlan& plan);
ContractionPlan load_plan(const std::string& path);

// Network layout as the plan sees it: nodes (site ids), the sites whose
// outputs each node carries, and bond dimensions between nodes.
struct NetworkShape {
  std::vector<int> nodes;
  std::vector<std::vector<int>> members;
  std::map<std::pair<int, int>, std::size_t> bond_dims;

  int node_index(int site) const;
  std::size_t bond_dim(int a, int b) const;
  std::vector<int> neighbors(int site) const;
};

// Shape of the network build_2d produces for a circuit, without building it.
NetworkShape network_shape(const Circuit& circuit);

template <class T>
struct GridNetwork2D;
template <class T>
NetworkShape network_shape(const GridNetwork2D<T>& net);

struct StepInfo {
  std::size_t step = 0;  // index into plan.steps
  std::vector<int> nodes;
  std::vector<int> cut_deps;  // indexes into plan.cuts
  std::vector<int> inputs_step;  // per input: contract-step index or -1 for a node
  std::vector<int> inputs_node;  // per input: node site id or -1
  int loops_open = 0;
  bool touches_batch = false;
  // Labels and dims of the result for a single amplitude.
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
};

struct PlanAnalysis {
  std::vector<StepInfo> steps;  // contract steps in plan order
  std::map<std::string, int> by_name;
  std::vector<int> loop_order;  // cut indexes, outermost first
  int output_step = -1;
  std::vector<std::size_t> cut_dims;
};

// Checks the plan against a network and derives per-step structure.
// Throws std::invalid_argument with the plan line on any violation.
PlanAnalysis analyze_plan(const ContractionPlan& plan, const NetworkShape& shape);

// One value per cut, indexed like plan.cuts.
using Path = std::vector<std::size_t>;

std::vector<std::size_t> cut_values(const ContractionPlan& plan, const NetworkShape& shape, int cut);
std::uint64_t total_paths(const ContractionPlan& plan, const NetworkShape& shape);
// Paths in loop order, outermost cut most significant.
Path path_at(const ContractionPlan& plan, const NetworkShape& shape, const PlanAnalysis& analysis, std::uint64_t index);
// f = 1 gives every path once; f < 1 gives ceil(f * total) paths drawn
// uniformly without replacement, returned in enumeration order.
std::vector<Path> enumerate_paths(const ContractionPlan& plan, const NetworkShape& shape, double fraction,
                                  std::uint64_t seed);
std::uint64_t fraction_path_count(double fraction, std::uint64_t total);

struct StepCost {
  std::string name;
  double flops = 0;
  double result_entries = 0;
  double peak_entries = 0;
  // flops per entry moved (inputs read plus result written)
  double intensity = 0;
  Reuse reuse = Reuse::none;
};

// Flop convention: a contraction of tensors whose distinct indexes have
// dimensions d1..dk costs 8 * d1 * ... * dk real operations (one complex
// multiply-add per term).
struct CostEstimate {
  std::uint64_t paths = 0;
  double flops_per_path = 0;
  double total_flops = 0;
  // Counts each reusable step once per distinct value of the cuts it
  // depends on.
  double amortized_flops = 0;
  double peak_tensor_entries = 0;
  double peak_live_entries = 0;
  std::vector<StepCost> steps;
};

CostEstimate estimate_cost(const ContractionPlan& plan, const NetworkShape& shape);

}  // namespace rqcsim
