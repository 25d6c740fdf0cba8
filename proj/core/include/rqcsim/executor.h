#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rqcsim/contract.h"
#include "rqcsim/network.h"
#include "rqcsim/plan.h"

namespace rqcsim {

struct ExecOptions {
  // The pool spreads paths over workers; with a single path it is handed
  // to the contractions instead.
  ContractOptions contract;
  // Keep reusable intermediates across paths. Never changes results.
  bool reuse = true;
  // Upper bound on bytes of live tensors for one path; 0 disables the check.
  std::size_t memory_budget_bytes = 0;
};

// Executes a contraction plan on a 2D network whose outputs are all open.
// Output patterns are indexed by qubit position; open entries stay as free
// indexes of the result, ordered by ascending site id.
template <class T>
class PlanExecutor {
 public:
  PlanExecutor(const GridNetwork2D<T>& net, ContractionPlan plan, ExecOptions options = {});

  const ContractionPlan& plan() const { return plan_; }
  const NetworkShape& shape() const { return shape_; }
  const PlanAnalysis& analysis() const { return analysis_; }
  const CostEstimate& cost() const { return cost_; }
  std::uint64_t total_paths() const;
  std::vector<Path> paths(double fraction = 1.0, std::uint64_t seed = 0) const;
  const ExecOptions& options() const { return options_; }

  // result[o][p] = contribution of paths[p] for outputs[o]. Paths run
  // outermost, so reusable per-path work is shared across outputs.
  std::vector<std::vector<Tensor<T>>> contributions(const std::vector<Path>& paths,
                                                    const std::vector<OutputPattern>& outputs) const;

  // Sum over paths, accumulated in path order.
  std::vector<Tensor<T>> sum(const std::vector<Path>& paths, const std::vector<OutputPattern>& outputs) const;

  Tensor<T> run_path(const Path& path, const OutputPattern& output) const;

 private:
  struct Cache;
  struct Context;
  std::shared_ptr<const Tensor<T>> evaluate(int step, Context& ctx) const;
  std::shared_ptr<const Tensor<T>> node_input(int site, Context& ctx) const;
  std::vector<std::size_t> cache_key(int step, const Context& ctx) const;
  Tensor<T> finish(std::shared_ptr<const Tensor<T>> t) const;

  const GridNetwork2D<T>& net_;
  ContractionPlan plan_;
  ExecOptions options_;
  NetworkShape shape_;
  PlanAnalysis analysis_;
  CostEstimate cost_;
  std::vector<int> all_sites_;
  std::vector<std::vector<int>> step_members_;
};

extern template class PlanExecutor<cfloat>;
extern template class PlanExecutor<cdouble>;

}  // namespace rqcsim
