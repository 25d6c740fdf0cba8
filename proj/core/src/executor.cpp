#include "rqcsim/executor.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "rqcsim/errors.h"
#include "rqcsim/thread_pool.h"

namespace rqcsim {

template <class T>
struct PlanExecutor<T>::Cache {
  const Cache* parent = nullptr;
  std::vector<std::map<std::vector<std::size_t>, std::shared_ptr<const Tensor<T>>>> entries;
  std::vector<std::vector<std::size_t>> cut_part;

  const Tensor<T>* find(int step, const std::vector<std::size_t>& key, std::shared_ptr<const Tensor<T>>& out) const {
    auto it = entries[step].find(key);
    if (it != entries[step].end()) {
      out = it->second;
      return out.get();
    }
    return parent ? parent->find(step, key, out) : nullptr;
  }
};

template <class T>
struct PlanExecutor<T>::Context {
  const Path* path = nullptr;
  const OutputPattern* output = nullptr;
  Cache* cache = nullptr;
  const std::vector<bool>* retain = nullptr;
  ContractOptions contract;
};

template <class T>
PlanExecutor<T>::PlanExecutor(const GridNetwork2D<T>& net, ContractionPlan plan, ExecOptions options)
    : net_(net), plan_(std::move(plan)), options_(options) {
  shape_ = network_shape(net_);
  analysis_ = analyze_plan(plan_, shape_);
  cost_ = estimate_cost(plan_, shape_);
  for (const auto& m : net_.members) all_sites_.insert(all_sites_.end(), m.begin(), m.end());
  std::sort(all_sites_.begin(), all_sites_.end());
  for (const auto& info : analysis_.steps) {
    std::vector<int> members;
    for (int node : info.nodes) {
      const auto& m = shape_.members[shape_.node_index(node)];
      members.insert(members.end(), m.begin(), m.end());
    }
    std::sort(members.begin(), members.end());
    step_members_.push_back(std::move(members));
  }
  if (options_.memory_budget_bytes > 0) {
    for (const auto& sc : cost_.steps) {
      double bytes = sc.peak_entries * sizeof(T);
      if (bytes > static_cast<double>(options_.memory_budget_bytes))
        throw ResourceError("plan step '" + sc.name + "' needs a tensor of " + std::to_string(bytes) +
                            " bytes, over the memory budget of " + std::to_string(options_.memory_budget_bytes));
    }
    double live = cost_.peak_live_entries * sizeof(T);
    if (live > static_cast<double>(options_.memory_budget_bytes))
      throw ResourceError("plan needs " + std::to_string(live) + " bytes of live tensors, over the memory budget of " +
                          std::to_string(options_.memory_budget_bytes));
  }
}

template <class T>
std::uint64_t PlanExecutor<T>::total_paths() const {
  return rqcsim::total_paths(plan_, shape_);
}

template <class T>
std::vector<Path> PlanExecutor<T>::paths(double fraction, std::uint64_t seed) const {
  return enumerate_paths(plan_, shape_, fraction, seed);
}

template <class T>
std::vector<std::size_t> PlanExecutor<T>::cache_key(int step, const Context& ctx) const {
  std::vector<std::size_t> key;
  for (int c : analysis_.steps[step].cut_deps) key.push_back((*ctx.path)[c]);
  for (int s : step_members_[step]) {
    auto pos = std::lower_bound(all_sites_.begin(), all_sites_.end(), s) - all_sites_.begin();
    key.push_back(static_cast<std::size_t>((*ctx.output)[pos] + 1));
  }
  return key;
}

template <class T>
std::shared_ptr<const Tensor<T>> PlanExecutor<T>::node_input(int site, Context& ctx) const {
  int ni = shape_.node_index(site);
  std::vector<std::pair<std::string, std::size_t>> fixed;
  for (std::size_t c = 0; c < plan_.cuts.size(); ++c) {
    const CutSpec& cut = plan_.cuts[c];
    if (cut.a == site || cut.b == site) fixed.emplace_back(bond_label(cut.a, cut.b), (*ctx.path)[c]);
  }
  for (int m : shape_.members[ni]) {
    auto pos = std::lower_bound(all_sites_.begin(), all_sites_.end(), m) - all_sites_.begin();
    int bit = (*ctx.output)[pos];
    if (bit >= 0) fixed.emplace_back(output_label(m), static_cast<std::size_t>(bit));
  }
  const Tensor<T>& t = net_.tensors[ni];
  if (fixed.empty()) return std::shared_ptr<const Tensor<T>>(&t, [](const Tensor<T>*) {});
  return std::make_shared<const Tensor<T>>(slice(t, fixed));
}

template <class T>
std::shared_ptr<const Tensor<T>> PlanExecutor<T>::evaluate(int step, Context& ctx) const {
  const bool retained = ctx.cache && (*ctx.retain)[step];
  std::vector<std::size_t> key;
  if (retained) {
    key = cache_key(step, ctx);
    std::shared_ptr<const Tensor<T>> hit;
    if (ctx.cache->find(step, key, hit)) return hit;
  }
  const StepInfo& info = analysis_.steps[step];
  std::shared_ptr<const Tensor<T>> acc;
  for (std::size_t k = 0; k < info.inputs_node.size(); ++k) {
    auto next = info.inputs_node[k] >= 0 ? node_input(info.inputs_node[k], ctx) : evaluate(info.inputs_step[k], ctx);
    if (!acc)
      acc = std::move(next);
    else
      acc = std::make_shared<const Tensor<T>>(contract(*acc, *next, ctx.contract));
  }
  if (retained) {
    std::vector<std::size_t> cut_part(key.begin(), key.begin() + static_cast<long>(info.cut_deps.size()));
    auto& entries = ctx.cache->entries[step];
    // Values for an older cut assignment will not come back: paths are
    // visited with the outer loops varying slowest.
    if (!entries.empty() && ctx.cache->cut_part[step] != cut_part) entries.clear();
    ctx.cache->cut_part[step] = std::move(cut_part);
    entries.emplace(std::move(key), acc);
  }
  return acc;
}

template <class T>
Tensor<T> PlanExecutor<T>::finish(std::shared_ptr<const Tensor<T>> t) const {
  std::vector<std::pair<int, std::string>> open;
  for (const auto& l : t->labels()) {
    if (l.empty() || l[0] != 'o') throw std::logic_error("plan result has a dangling index " + l);
    open.emplace_back(std::stoi(l.substr(1)), l);
  }
  std::sort(open.begin(), open.end());
  std::vector<std::string> order;
  for (auto& [s, l] : open) order.push_back(l);
  if (order == t->labels()) return *t;
  return permute_to(*t, order, options_.contract);
}

template <class T>
std::vector<std::vector<Tensor<T>>> PlanExecutor<T>::contributions(const std::vector<Path>& paths,
                                                                     const std::vector<OutputPattern>& outputs) const {
  for (const auto& p : paths)
    if (p.size() != plan_.cuts.size()) throw std::invalid_argument("path has the wrong number of cut values");
  for (const auto& o : outputs)
    if (o.size() != all_sites_.size()) throw std::invalid_argument("output pattern length mismatch");

  const std::size_t nsteps = analysis_.steps.size();
  std::vector<bool> retain(nsteps, false);
  if (options_.reuse) {
    for (std::size_t i = 0; i < nsteps; ++i) {
      if (static_cast<int>(i) == analysis_.output_step) continue;
      if (plan_.steps[analysis_.steps[i].step].reuse != Reuse::none) {
        retain[i] = true;
        continue;
      }
      // Across several outputs, keep work whose output bits never change.
      if (outputs.size() > 1) {
        bool same = true;
        for (int s : step_members_[i]) {
          auto pos = std::lower_bound(all_sites_.begin(), all_sites_.end(), s) - all_sites_.begin();
          for (const auto& o : outputs) same = same && o[pos] == outputs[0][pos];
        }
        retain[i] = same;
      }
    }
  }

  std::vector<std::vector<Tensor<T>>> result(outputs.size(), std::vector<Tensor<T>>(paths.size()));
  ThreadPool* pool = options_.contract.pool;
  const bool path_parallel = pool && pool->size() > 1 && paths.size() > 1;
  ContractOptions inner = options_.contract;
  if (path_parallel) inner.pool = nullptr;

  Cache shared;
  shared.entries.resize(nsteps);
  shared.cut_part.resize(nsteps);
  if (options_.reuse && !paths.empty()) {
    // Path-independent reusable work runs once, before the workers start.
    for (const auto& out : outputs) {
      for (std::size_t i = 0; i < nsteps; ++i) {
        if (!retain[i] || !analysis_.steps[i].cut_deps.empty()) continue;
        Context ctx{&paths[0], &out, &shared, &retain, options_.contract};
        evaluate(static_cast<int>(i), ctx);
      }
    }
  }

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    Cache local;
    local.parent = &shared;
    local.entries.resize(nsteps);
    local.cut_part.resize(nsteps);
    for (std::size_t p = lo; p < hi; ++p)
      for (std::size_t o = 0; o < outputs.size(); ++o) {
        Context ctx{&paths[p], &outputs[o], options_.reuse ? &local : nullptr, &retain, inner};
        result[o][p] = finish(evaluate(analysis_.output_step, ctx));
      }
  };
  if (path_parallel)
    pool->parallel_for(paths.size(), run_range);
  else
    run_range(0, paths.size());
  return result;
}

template <class T>
std::vector<Tensor<T>> PlanExecutor<T>::sum(const std::vector<Path>& paths,
                                            const std::vector<OutputPattern>& outputs) const {
  auto parts = contributions(paths, outputs);
  std::vector<Tensor<T>> out;
  for (auto& per_path : parts) {
    if (per_path.empty()) throw std::invalid_argument("no paths to sum");
    Tensor<T> acc = per_path[0];
    for (std::size_t p = 1; p < per_path.size(); ++p) {
      auto dst = acc.data();
      auto src = per_path[p].data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

template <class T>
Tensor<T> PlanExecutor<T>::run_path(const Path& path, const OutputPattern& output) const {
  std::vector<bool> retain(analysis_.steps.size(), false);
  Context ctx{&path, &output, nullptr, &retain, options_.contract};
  return finish(evaluate(analysis_.output_step, ctx));
}

template class PlanExecutor<cfloat>;
template class PlanExecutor<cdouble>;

}  // namespace rqcsim
