#include "rqcsim/builtin_plans.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rqcsim/data.h"
#include "rqcsim/errors.h"

namespace rqcsim {
namespace {

PlanStep contract_step(const std::vector<std::string>& inputs, std::string output, Reuse reuse = Reuse::none) {
  PlanStep s;
  s.kind = PlanStep::Kind::contract;
  s.inputs = inputs;
  s.output = std::move(output);
  s.reuse = reuse;
  return s;
}

PlanStep loop_step(int cut) {
  PlanStep s;
  s.kind = PlanStep::Kind::loop;
  s.cut = cut;
  return s;
}

std::vector<std::string> tokens(const std::vector<int>& sites) {
  std::vector<std::string> out;
  for (int s : sites) out.push_back(std::to_string(s));
  return out;
}

int add_cut(ContractionPlan& plan, int a, int b) {
  CutSpec c;
  c.a = std::min(a, b);
  c.b = std::max(a, b);
  plan.cuts.push_back(c);
  return static_cast<int>(plan.cuts.size()) - 1;
}

// Greedy fold order: each next site touches what is already folded (when
// possible) and leaves the fewest bonds open. Keeps intermediate fronts
// narrow where plain row-major order would not.
std::vector<int> fold_order(const Lattice& lattice, std::vector<int> folded, std::vector<int> sites) {
  std::set<int> in(folded.begin(), folded.end());
  auto open_bonds = [&](int extra) {
    int n = 0;
    for (int s : in)
      for (int nb : lattice.neighbors(s)) n += nb != extra && !in.count(nb);
    for (int nb : lattice.neighbors(extra)) n += !in.count(nb);
    return n;
  };
  std::vector<int> out;
  while (!sites.empty()) {
    std::size_t best = 0;
    int best_score = 0;
    bool best_adj = false;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      bool adj = false;
      for (int nb : lattice.neighbors(sites[i])) adj = adj || in.count(nb);
      int score = in.empty() ? static_cast<int>(lattice.neighbors(sites[i]).size()) : open_bonds(sites[i]);
      if (i == 0 || (adj && !best_adj) || (adj == best_adj && score < best_score)) {
        best = i;
        best_score = score;
        best_adj = adj;
      }
    }
    out.push_back(sites[best]);
    in.insert(sites[best]);
    sites.erase(sites.begin() + static_cast<long>(best));
  }
  return out;
}

}  // namespace

ContractionPlan grid_plan(const Lattice& lattice) {
  const int rows = lattice.grid_rows(), cols = lattice.grid_cols();
  if (lattice.kind() != Lattice::Kind::rectangular || rows < 2 || cols < 2)
    throw std::invalid_argument("grid_plan needs a rectangular lattice of at least 2x2");
  const int h = rows / 2, w = cols / 2;
  auto id = [&](int r, int c) { return lattice.id_of(r, c); };

  const int b_star = id(h - 1, cols - 1), d1 = id(h, cols - 1);
  const int c_star = id(rows - 1, w - 1), d2 = id(rows - 1, w);

  std::vector<int> a_sites, p_b, c_sites, pp_d;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int s = id(r, c);
      if (r < h && c < w)
        a_sites.push_back(s);
      else if (r < h)
        (s == b_star ? void() : p_b.push_back(s));
      else if (c < w)
        c_sites.push_back(s);
      else if (s != d1 && s != d2)
        pp_d.push_back(s);
    }
  std::vector<int> c_rest;
  for (int s : c_sites)
    if (s != c_star) c_rest.push_back(s);
  const std::size_t nbatch = std::min<std::size_t>(6, c_rest.size());
  std::vector<int> batch(c_rest.begin(), c_rest.begin() + static_cast<long>(nbatch));
  std::vector<int> p_c(c_rest.begin() + static_cast<long>(nbatch), c_rest.end());

  ContractionPlan plan;
  plan.name = "grid-" + std::to_string(rows) + "x" + std::to_string(cols);
  plan.batch_sites = batch;
  std::sort(plan.batch_sites.begin(), plan.batch_sites.end());
  const int right = add_cut(plan, b_star, d1);
  const int bottom = add_cut(plan, c_star, d2);

  plan.steps.push_back(contract_step(tokens(fold_order(lattice, {}, a_sites)), "A", Reuse::global));
  if (!p_b.empty()) plan.steps.push_back(contract_step(tokens(fold_order(lattice, {}, p_b)), "pB", Reuse::global));
  if (!pp_d.empty()) plan.steps.push_back(contract_step(tokens(fold_order(lattice, {}, pp_d)), "ppD", Reuse::global));
  if (!p_c.empty()) plan.steps.push_back(contract_step(tokens(fold_order(lattice, {}, p_c)), "pC", Reuse::global));

  plan.steps.push_back(loop_step(right));
  std::vector<std::string> b_in;
  if (!p_b.empty()) b_in.push_back("pB");
  b_in.push_back(std::to_string(b_star));
  plan.steps.push_back(contract_step(b_in, "B", Reuse::outer));
  plan.steps.push_back(contract_step({"A", "B"}, "AB", Reuse::outer));
  std::vector<std::string> d_in;
  if (!pp_d.empty()) d_in.push_back("ppD");
  if (d1 != d2) {
    d_in.push_back(std::to_string(d1));
    plan.steps.push_back(contract_step(d_in, "pD", Reuse::outer));
    d_in = {"pD"};
  }

  plan.steps.push_back(loop_step(bottom));
  d_in.push_back(std::to_string(d2));
  plan.steps.push_back(contract_step(d_in, "D"));
  plan.steps.push_back(contract_step({"AB", "D"}, "ABD"));
  std::vector<std::string> c_in;
  if (!p_c.empty()) c_in.push_back("pC");
  std::vector<int> c_tail = batch;
  c_tail.push_back(c_star);
  for (int s : fold_order(lattice, p_c, c_tail)) c_in.push_back(std::to_string(s));
  plan.steps.push_back(contract_step(c_in, "C"));
  plan.steps.push_back(contract_step({"ABD", "C"}, "ABCD"));
  plan.output = "ABCD";
  return plan;
}

ContractionPlan chain_plan(const Lattice& lattice) {
  std::vector<int> ids = lattice.site_ids();
  ContractionPlan plan;
  plan.name = "chain-" + std::to_string(ids.size());
  if (ids.size() < 2) {
    plan.steps.push_back(contract_step(tokens(ids), "X"));
    plan.output = "X";
    return plan;
  }
  const std::size_t mid = ids.size() / 2;
  if (!lattice.adjacent(ids[mid - 1], ids[mid])) throw std::invalid_argument("chain_plan needs a connected chain");
  const int cut = add_cut(plan, ids[mid - 1], ids[mid]);
  std::vector<int> left(ids.begin(), ids.begin() + static_cast<long>(mid));
  std::vector<int> right(ids.begin() + static_cast<long>(mid), ids.end());
  // Right half grows from the far end so the cut site joins last.
  std::reverse(right.begin(), right.end());
  plan.batch_sites = right.size() > 1 ? std::vector<int>(right.begin(), right.end() - 1) : std::vector<int>{};
  std::sort(plan.batch_sites.begin(), plan.batch_sites.end());
  if (right.size() > 1)
    plan.steps.push_back(
        contract_step(tokens(std::vector<int>(right.begin(), right.end() - 1)), "pR", Reuse::global));
  plan.steps.push_back(loop_step(cut));
  plan.steps.push_back(contract_step(tokens(left), "L"));
  std::vector<std::string> r_in;
  if (right.size() > 1) r_in.push_back("pR");
  r_in.push_back(std::to_string(right.back()));
  plan.steps.push_back(contract_step(r_in, "R"));
  plan.steps.push_back(contract_step({"L", "R"}, "LR"));
  plan.output = "LR";
  return plan;
}

std::optional<ContractionPlan> bristlecone_plan(int qubits) {
  const std::string name = "bristlecone_" + std::to_string(qubits) + ".plan";
  auto text = embedded_file(name);
  if (text.empty()) return std::nullopt;
  return parse_plan(text, "bristlecone-" + std::to_string(qubits));
}

ContractionPlan auto_plan(const Circuit& circuit, double max_tensor_entries, int max_cuts) {
  const NetworkShape shape = network_shape(circuit);
  ContractionPlan plan;
  plan.name = "auto";
  std::vector<std::string> order = tokens(shape.nodes);
  auto rebuild = [&](const std::vector<std::pair<int, int>>& cuts) {
    ContractionPlan p;
    p.name = "auto";
    for (auto [a, b] : cuts) p.steps.push_back(loop_step(add_cut(p, a, b)));
    p.steps.push_back(contract_step(order, "X"));
    p.output = "X";
    return p;
  };
  std::vector<std::pair<int, int>> cuts;
  plan = rebuild(cuts);
  if (max_tensor_entries <= 0) return plan;
  double peak = estimate_cost(plan, shape).peak_tensor_entries;
  while (peak > max_tensor_entries && static_cast<int>(cuts.size()) < max_cuts) {
    // Lowest peak first, then fewest flops per path. A cut that does not
    // lower the peak alone can still enable the next one.
    double best_peak = 0, best_flops = 0;
    std::pair<int, int> best{-1, -1};
    for (const auto& [bond, dim] : shape.bond_dims) {
      if (dim < 2 || std::find(cuts.begin(), cuts.end(), bond) != cuts.end()) continue;
      auto trial = cuts;
      trial.push_back(bond);
      CostEstimate est = estimate_cost(rebuild(trial), shape);
      if (best.first < 0 || est.peak_tensor_entries < best_peak ||
          (est.peak_tensor_entries == best_peak && est.flops_per_path < best_flops)) {
        best_peak = est.peak_tensor_entries;
        best_flops = est.flops_per_path;
        best = bond;
      }
    }
    if (best.first < 0) break;
    cuts.push_back(best);
    peak = best_peak;
  }
  return rebuild(cuts);
}

ContractionPlan builtin_plan(const Circuit& circuit, double memory_budget_bytes, std::size_t scalar_bytes) {
  const Lattice& lat = circuit.lattice();
  std::optional<ContractionPlan> plan;
  if (lat.kind() == Lattice::Kind::rectangular) {
    if (lat.grid_rows() >= 2 && lat.grid_cols() >= 2)
      plan = grid_plan(lat);
    else
      plan = chain_plan(lat);
  } else if (lat.kind() == Lattice::Kind::bristlecone) {
    plan = bristlecone_plan(static_cast<int>(lat.size()));
  }
  const double entries = memory_budget_bytes > 0 ? memory_budget_bytes / static_cast<double>(scalar_bytes) : 0;
  if (!plan) return auto_plan(circuit, entries);
  if (entries > 0) {
    CostEstimate cost = estimate_cost(*plan, network_shape(circuit));
    for (const auto& st : cost.steps)
      if (st.peak_entries > entries)
        throw ResourceError("built-in plan " + plan->name + ": step '" + st.name + "' needs " +
                            std::to_string(st.peak_entries * static_cast<double>(scalar_bytes)) +
                            " bytes, over the memory budget");
  }
  return *plan;
}

ContractionPlan resolve_plan(const std::string& spec, const Circuit& circuit, double memory_budget_bytes,
                             std::size_t scalar_bytes) {
  if (spec.empty() || spec == "auto") return builtin_plan(circuit, memory_budget_bytes, scalar_bytes);
  return load_plan(spec);
}

}  // namespace rqcsim
