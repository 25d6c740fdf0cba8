#include <algorithm>
#include <set>

#include "rqcsim/plan.h"

namespace rqcsim {

CostEstimate estimate_cost(const ContractionPlan& plan, const NetworkShape& shape) {
  PlanAnalysis an = analyze_plan(plan, shape);
  CostEstimate est;
  est.paths = total_paths(plan, shape);

  auto entries = [](const std::vector<std::size_t>& dims) {
    double n = 1;
    for (auto d : dims) n *= static_cast<double>(d);
    return n;
  };
  auto node_shape = [&](int node, std::vector<std::string>& labels, std::vector<std::size_t>& dims) {
    for (int nb : shape.neighbors(node)) {
      if (plan.find_cut(node, nb) >= 0) continue;
      labels.push_back(std::to_string(std::min(node, nb)) + "_" + std::to_string(std::max(node, nb)));
      dims.push_back(shape.bond_dim(node, nb));
    }
  };
  std::vector<std::vector<std::string>> step_labels(an.steps.size());
  std::vector<std::vector<std::size_t>> step_dims(an.steps.size());

  // Live intermediates: a result stays alive until its consumer finishes.
  double live = 0;
  for (std::size_t i = 0; i < an.steps.size(); ++i) {
    const StepInfo& info = an.steps[i];
    StepCost sc;
    sc.name = plan.steps[info.step].output;
    sc.reuse = plan.steps[info.step].reuse;
    std::vector<std::string> acc_l;
    std::vector<std::size_t> acc_d;
    double moved = 0;
    for (std::size_t k = 0; k < info.inputs_node.size(); ++k) {
      std::vector<std::string> l;
      std::vector<std::size_t> d;
      if (info.inputs_node[k] >= 0) {
        node_shape(info.inputs_node[k], l, d);
      } else {
        l = step_labels[info.inputs_step[k]];
        d = step_dims[info.inputs_step[k]];
        live -= entries(d);
      }
      moved += entries(d);
      sc.peak_entries = std::max(sc.peak_entries, entries(d));
      if (k == 0) {
        acc_l = l;
        acc_d = d;
        continue;
      }
      // All distinct indexes of the pair.
      std::vector<std::string> all_l = acc_l;
      std::vector<std::size_t> all_d = acc_d;
      for (std::size_t j = 0; j < l.size(); ++j)
        if (std::find(all_l.begin(), all_l.end(), l[j]) == all_l.end()) {
          all_l.push_back(l[j]);
          all_d.push_back(d[j]);
        }
      sc.flops += 8.0 * entries(all_d);
      std::vector<std::string> nl;
      std::vector<std::size_t> nd;
      for (std::size_t j = 0; j < acc_l.size(); ++j)
        if (std::find(l.begin(), l.end(), acc_l[j]) == l.end()) {
          nl.push_back(acc_l[j]);
          nd.push_back(acc_d[j]);
        }
      for (std::size_t j = 0; j < l.size(); ++j)
        if (std::find(acc_l.begin(), acc_l.end(), l[j]) == acc_l.end()) {
          nl.push_back(l[j]);
          nd.push_back(d[j]);
        }
      acc_l = std::move(nl);
      acc_d = std::move(nd);
      sc.peak_entries = std::max(sc.peak_entries, entries(acc_d));
      moved += entries(acc_d);
    }
    sc.result_entries = entries(acc_d);
    sc.intensity = moved > 0 ? sc.flops / moved : 0;
    step_labels[i] = acc_l;
    step_dims[i] = acc_d;
    live += sc.result_entries;
    est.peak_live_entries = std::max(est.peak_live_entries, live + sc.peak_entries);
    est.peak_tensor_entries = std::max(est.peak_tensor_entries, sc.peak_entries);
    est.flops_per_path += sc.flops;

    // Amortized: executed once per distinct value of the cuts it reads.
    double runs = 1;
    for (int c : info.cut_deps) runs *= static_cast<double>(cut_values(plan, shape, c).size());
    if (sc.reuse == Reuse::none) runs = static_cast<double>(est.paths);
    est.amortized_flops += runs * sc.flops;
    est.steps.push_back(sc);
  }
  est.total_flops = static_cast<double>(est.paths) * est.flops_per_path;
  return est;
}

}  // namespace rqcsim
