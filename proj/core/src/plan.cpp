#include "rqcsim/plan.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rqcsim/errors.h"
#include "rqcsim/gate_tensor.h"
#include "rqcsim/network.h"

namespace rqcsim {
namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_bond(std::string_view s, int& a, int& b) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) return false;
  return parse_int(s.substr(0, dash), a) && parse_int(s.substr(dash + 1), b) && a >= 0 && b >= 0 && a != b;
}

bool is_site_token(const std::string& t) {
  int v;
  return parse_int(t, v);
}

std::string step_where(const PlanStep& s) { return "plan line " + std::to_string(s.line) + ": "; }

}  // namespace

int ContractionPlan::find_cut(int a, int b) const {
  for (std::size_t i = 0; i < cuts.size(); ++i)
    if ((cuts[i].a == a && cuts[i].b == b) || (cuts[i].a == b && cuts[i].b == a)) return static_cast<int>(i);
  return -1;
}

ContractionPlan parse_plan(std::string_view text, std::string name) {
  ContractionPlan plan;
  plan.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto w = split_ws(line);
    if (w.empty()) continue;
    const std::string& kw = w[0];
    if (kw == "cut") {
      CutSpec c;
      if (w.size() < 2 || !parse_bond(w[1], c.a, c.b)) throw ParseError(lineno, "expected 'cut <a>-<b>'");
      if (plan.find_cut(c.a, c.b) >= 0) throw ParseError(lineno, "bond cut twice: " + w[1]);
      if (w.size() > 2) {
        if (w.size() != 4 || w[2] != "values") throw ParseError(lineno, "expected 'values v0,v1,...'");
        std::stringstream vs(w[3]);
        std::string v;
        while (std::getline(vs, v, ',')) {
          std::size_t x;
          if (!parse_size(v, x)) throw ParseError(lineno, "bad cut value '" + v + "'");
          c.values.push_back(x);
        }
        if (c.values.empty()) throw ParseError(lineno, "empty value restriction");
      }
      plan.cuts.push_back(c);
    } else if (kw == "batch") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        int s;
        if (!parse_int(w[i], s) || s < 0) throw ParseError(lineno, "bad batch site '" + w[i] + "'");
        plan.batch_sites.push_back(s);
      }
    } else if (kw == "loop") {
      PlanStep st;
      st.kind = PlanStep::Kind::loop;
      st.line = lineno;
      int a, b;
      if (w.size() != 2 || !parse_bond(w[1], a, b)) throw ParseError(lineno, "expected 'loop <a>-<b>'");
      st.cut = plan.find_cut(a, b);
      if (st.cut < 0) throw ParseError(lineno, "loop over undeclared cut " + w[1]);
      plan.steps.push_back(st);
    } else if (kw == "contract") {
      PlanStep st;
      st.line = lineno;
      auto arrow = std::find(w.begin(), w.end(), "->");
      if (arrow == w.end() || arrow == w.begin() + 1 || arrow + 1 == w.end())
        throw ParseError(lineno, "expected 'contract <inputs> -> <name>'");
      st.inputs.assign(w.begin() + 1, arrow);
      st.output = *(arrow + 1);
      if (is_site_token(st.output)) throw ParseError(lineno, "intermediate names must not be numbers");
      for (auto it = arrow + 2; it != w.end(); ++it) {
        if (*it == "reuse:outer")
          st.reuse = Reuse::outer;
        else if (*it == "reuse:global")
          st.reuse = Reuse::global;
        else
          throw ParseError(lineno, "unknown annotation '" + *it + "'");
      }
      plan.steps.push_back(st);
    } else if (kw == "output") {
      if (w.size() != 2) throw ParseError(lineno, "expected 'output <name>'");
      plan.output = w[1];
    } else {
      throw ParseError(lineno, "unknown statement '" + kw + "'");
    }
  }
  if (plan.output.empty()) {
    for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it)
      if (it->kind == PlanStep::Kind::contract) {
        plan.output = it->output;
        break;
      }
  }
  return plan;
}

std::string write_plan(const ContractionPlan& plan) {
  std::ostringstream out;
  for (const auto& c : plan.cuts) {
    out << "cut " << c.name();
    if (!c.values.empty()) {
      out << " values ";
      for (std::size_t i = 0; i < c.values.size(); ++i) out << (i ? "," : "") << c.values[i];
    }
    out << "\n";
  }
  if (!plan.batch_sites.empty()) {
    out << "batch";
    for (int s : plan.batch_sites) out << ' ' << s;
    out << "\n";
  }
  for (const auto& st : plan.steps) {
    if (st.kind == PlanStep::Kind::loop) {
      out << "loop " << plan.cuts[st.cut].name() << "\n";
      continue;
    }
    out << "contract";
    for (const auto& t : st.inputs) out << ' ' << t;
    out << " -> " << st.output;
    if (st.reuse == Reuse::outer) out << " reuse:outer";
    if (st.reuse == Reuse::global) out << " reuse:global";
    out << "\n";
  }
  out << "output " << plan.output << "\n";
  return out.str();
}

ContractionPlan load_plan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open plan file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_plan(ss.str(), path);
}

int NetworkShape::node_index(int site) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == site) return static_cast<int>(i);
  return -1;
}

std::size_t NetworkShape::bond_dim(int a, int b) const {
  auto it = bond_dims.find({std::min(a, b), std::max(a, b)});
  if (it == bond_dims.end())
    throw std::invalid_argument("no bond between " + std::to_string(a) + " and " + std::to_string(b));
  return it->second;
}

std::vector<int> NetworkShape::neighbors(int site) const {
  std::vector<int> out;
  for (const auto& [bond, d] : bond_dims) {
    if (bond.first == site) out.push_back(bond.second);
    if (bond.second == site) out.push_back(bond.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NetworkShape network_shape(const Circuit& circuit) {
  const Lattice& lat = circuit.lattice();
  NetworkShape shape;
  shape.nodes = lat.site_ids();
  for (int s : shape.nodes) shape.members.push_back({s});
  for (auto b : lat.bonds()) shape.bond_dims[b] = 1;
  std::size_t cz_rank = factor_two_qubit(GateKind::cz).rank;
  std::size_t iswap_rank = factor_two_qubit(GateKind::iswap).rank;
  for (const Gate& g : circuit.gates())
    if (g.two_qubit())
      shape.bond_dims[{std::min(g.q0, g.q1), std::max(g.q0, g.q1)}] *= g.kind == GateKind::cz ? cz_rank : iswap_rank;
  if (lat.kind() == Lattice::Kind::bristlecone && lat.size() == 72) {
    for (int s : lat.site_ids()) {
      if (lat.neighbors(s).size() != 1) continue;
      int nb = lat.neighbors(s)[0];
      int i = shape.node_index(s);
      int host = shape.node_index(nb);
      shape.members[host].push_back(s);
      shape.bond_dims.erase({std::min(s, nb), std::max(s, nb)});
      shape.nodes.erase(shape.nodes.begin() + i);
      shape.members.erase(shape.members.begin() + i);
    }
  }
  return shape;
}

template <class T>
NetworkShape network_shape(const GridNetwork2D<T>& net) {
  NetworkShape shape;
  shape.nodes = net.sites;
  shape.members = net.members;
  shape.bond_dims = net.bond_dims;
  return shape;
}
template NetworkShape network_shape(const GridNetwork2D<cfloat>&);
template NetworkShape network_shape(const GridNetwork2D<cdouble>&);

PlanAnalysis analyze_plan(const ContractionPlan& plan, const NetworkShape& shape) {
  PlanAnalysis an;

  for (std::size_t c = 0; c < plan.cuts.size(); ++c) {
    const CutSpec& cut = plan.cuts[c];
    if (shape.node_index(cut.a) < 0 || shape.node_index(cut.b) < 0 ||
        !shape.bond_dims.count({std::min(cut.a, cut.b), std::max(cut.a, cut.b)}))
      throw std::invalid_argument("cut " + cut.name() + " is not a bond of the network");
    std::size_t d = shape.bond_dim(cut.a, cut.b);
    std::set<std::size_t> seen;
    for (auto v : cut.values)
      if (v >= d || !seen.insert(v).second)
        throw std::invalid_argument("cut " + cut.name() + ": value " + std::to_string(v) + " invalid for dimension " +
                                    std::to_string(d));
    an.cut_dims.push_back(d);
  }

  std::set<int> all_members;
  for (const auto& m : shape.members) all_members.insert(m.begin(), m.end());
  for (int s : plan.batch_sites)
    if (!all_members.count(s)) throw std::invalid_argument("batch site " + std::to_string(s) + " is not in the network");
  std::set<int> batch(plan.batch_sites.begin(), plan.batch_sites.end());

  // Labels of a node tensor once cut bonds are sliced and outputs fixed.
  auto node_labels = [&](int node, std::vector<std::string>& labels, std::vector<std::size_t>& dims) {
    for (int nb : shape.neighbors(node)) {
      if (plan.find_cut(node, nb) >= 0) continue;
      labels.push_back(bond_label(node, nb));
      dims.push_back(shape.bond_dim(node, nb));
    }
  };

  std::vector<bool> node_used(shape.nodes.size(), false);
  std::vector<int> loop_pos(plan.cuts.size(), -1);
  std::vector<bool> consumed;
  int loops_open = 0;
  for (std::size_t si = 0; si < plan.steps.size(); ++si) {
    const PlanStep& st = plan.steps[si];
    if (st.kind == PlanStep::Kind::loop) {
      if (loop_pos[st.cut] >= 0) throw std::invalid_argument(step_where(st) + "cut looped twice");
      loop_pos[st.cut] = loops_open++;
      an.loop_order.push_back(st.cut);
      continue;
    }
    StepInfo info;
    info.step = si;
    info.loops_open = loops_open;
    if (an.by_name.count(st.output)) throw std::invalid_argument(step_where(st) + "name defined twice: " + st.output);
    std::set<int> cut_deps;
    bool first = true;
    for (const auto& tok : st.inputs) {
      std::vector<std::string> labels;
      std::vector<std::size_t> dims;
      int site;
      if (parse_int(tok, site)) {
        int ni = shape.node_index(site);
        if (ni < 0) throw std::invalid_argument(step_where(st) + "site " + tok + " is not a network node");
        if (node_used[ni]) throw std::invalid_argument(step_where(st) + "site " + tok + " used twice");
        node_used[ni] = true;
        info.nodes.push_back(site);
        info.inputs_node.push_back(site);
        info.inputs_step.push_back(-1);
        node_labels(site, labels, dims);
        for (int m : shape.members[ni]) info.touches_batch = info.touches_batch || batch.count(m);
        for (std::size_t c = 0; c < plan.cuts.size(); ++c)
          if (plan.cuts[c].a == site || plan.cuts[c].b == site) cut_deps.insert(static_cast<int>(c));
      } else {
        auto it = an.by_name.find(tok);
        if (it == an.by_name.end()) throw std::invalid_argument(step_where(st) + "undefined intermediate " + tok);
        if (consumed[it->second]) throw std::invalid_argument(step_where(st) + "intermediate used twice: " + tok);
        consumed[it->second] = true;
        const StepInfo& src = an.steps[it->second];
        info.nodes.insert(info.nodes.end(), src.nodes.begin(), src.nodes.end());
        info.inputs_node.push_back(-1);
        info.inputs_step.push_back(it->second);
        labels = src.labels;
        dims = src.dims;
        info.touches_batch = info.touches_batch || src.touches_batch;
        cut_deps.insert(src.cut_deps.begin(), src.cut_deps.end());
      }
      if (first) {
        info.labels = labels;
        info.dims = dims;
        first = false;
        continue;
      }
      std::vector<std::string> out_labels;
      std::vector<std::size_t> out_dims;
      for (std::size_t i = 0; i < info.labels.size(); ++i)
        if (std::find(labels.begin(), labels.end(), info.labels[i]) == labels.end()) {
          out_labels.push_back(info.labels[i]);
          out_dims.push_back(info.dims[i]);
        }
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (std::find(info.labels.begin(), info.labels.end(), labels[i]) == info.labels.end()) {
          out_labels.push_back(labels[i]);
          out_dims.push_back(dims[i]);
        }
      info.labels = std::move(out_labels);
      info.dims = std::move(out_dims);
    }
    info.cut_deps.assign(cut_deps.begin(), cut_deps.end());
    std::sort(info.nodes.begin(), info.nodes.end());
    for (int c : info.cut_deps)
      if (loop_pos[c] < 0)
        throw std::invalid_argument(step_where(st) + st.output + " depends on cut " + plan.cuts[c].name() +
                                    " before its loop");
    an.by_name[st.output] = static_cast<int>(an.steps.size());
    an.steps.push_back(std::move(info));
    consumed.push_back(false);
  }

  for (std::size_t c = 0; c < plan.cuts.size(); ++c)
    if (loop_pos[c] < 0) throw std::invalid_argument("cut " + plan.cuts[c].name() + " has no loop");
  for (std::size_t i = 0; i < node_used.size(); ++i)
    if (!node_used[i]) throw std::invalid_argument("site " + std::to_string(shape.nodes[i]) + " is never contracted");
  auto out_it = an.by_name.find(plan.output);
  if (out_it == an.by_name.end()) throw std::invalid_argument("plan output '" + plan.output + "' is undefined");
  an.output_step = out_it->second;
  for (std::size_t i = 0; i < an.steps.size(); ++i)
    if (!consumed[i] && static_cast<int>(i) != an.output_step)
      throw std::invalid_argument(step_where(plan.steps[an.steps[i].step]) + "intermediate " +
                                  plan.steps[an.steps[i].step].output + " is never used");
  if (consumed[an.output_step]) throw std::invalid_argument("plan output is consumed by another step");

  // Reuse annotations must not hide a dependency on a looped value.
  int innermost = an.loop_order.empty() ? -1 : an.loop_order.back();
  for (const auto& info : an.steps) {
    const PlanStep& st = plan.steps[info.step];
    if (st.reuse == Reuse::global && !info.cut_deps.empty())
      throw std::invalid_argument(step_where(st) + "reuse:global on " + st.output + ", which depends on cut " +
                                  plan.cuts[info.cut_deps[0]].name());
    if (st.reuse == Reuse::outer &&
        std::find(info.cut_deps.begin(), info.cut_deps.end(), innermost) != info.cut_deps.end())
      throw std::invalid_argument(step_where(st) + "reuse:outer on " + st.output + ", which depends on the innermost cut");
  }
  return an;
}

}  // namespace rqcsim
