#include "rqcsim/network.h"

#include <algorithm>
#include <stdexcept>

#include "rqcsim/gate_tensor.h"
#include "rqcsim/thread_pool.h"

namespace rqcsim {

OutputPattern all_open(std::size_t n) { return OutputPattern(n, -1); }

OutputPattern fixed_output(const Bits& bits) { return OutputPattern(bits.begin(), bits.end()); }

std::string bond_label(int a, int b) {
  if (a > b) std::swap(a, b);
  return "b" + std::to_string(a) + "_" + std::to_string(b);
}
std::string output_label(int site) { return "o" + std::to_string(site); }
std::string time_label(int site, int block) { return "t" + std::to_string(site) + "_" + std::to_string(block); }
std::string virtual_label(int gate_index) { return "v" + std::to_string(gate_index); }

template <class T>
int GridNetwork2D<T>::node_of(int site) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (std::find(members[i].begin(), members[i].end(), site) != members[i].end()) return static_cast<int>(i);
  return -1;
}

template <class T>
std::size_t GridNetwork2D<T>::bond_dim(int a, int b) const {
  auto it = bond_dims.find({std::min(a, b), std::max(a, b)});
  if (it == bond_dims.end()) throw std::invalid_argument("no bond between sites " + std::to_string(a) + " and " +
                                                         std::to_string(b));
  return it->second;
}

namespace {

void check_pattern(const Circuit& circuit, const Bits& in, const OutputPattern& out) {
  if (in.size() != circuit.num_qubits()) throw std::invalid_argument("input bit-string length mismatch");
  if (out.size() != circuit.num_qubits()) throw std::invalid_argument("output pattern length mismatch");
  for (int v : out)
    if (v < -1 || v > 1) throw std::invalid_argument("output pattern entries must be 0, 1 or -1");
}

ContractOptions without_pool(ContractOptions o) {
  o.pool = nullptr;
  return o;
}

}  // namespace

template <class T>
GridNetwork3D<T> build_3d(const Circuit& circuit, const Bits& in, const OutputPattern& out,
                          const ContractOptions& options) {
  check_pattern(circuit, in, out);
  const Lattice& lat = circuit.lattice();
  const std::size_t n = lat.size();
  const int K = circuit.blocks();
  const auto& gates = circuit.gates();

  std::vector<std::vector<std::vector<int>>> per_block(n, std::vector<std::vector<int>>(K));
  for (std::size_t gi = 0; gi < gates.size(); ++gi) {
    int k = circuit.depth().block_of_cycle(gates[gi].cycle);
    per_block[lat.position(gates[gi].q0)][k].push_back(static_cast<int>(gi));
    if (gates[gi].two_qubit()) per_block[lat.position(gates[gi].q1)][k].push_back(static_cast<int>(gi));
  }
  FactoredGate cz = factor_two_qubit(GateKind::cz);
  FactoredGate iswap = factor_two_qubit(GateKind::iswap);

  GridNetwork3D<T> net;
  net.sites = lat.site_ids();
  net.blocks = K;
  net.tensors.assign(n, std::vector<Tensor<T>>(K));
  ContractOptions local = without_pool(options);

  auto build_site = [&](std::size_t p) {
    const int s = net.sites[p];
    for (int k = 0; k < K; ++k) {
      Tensor<cdouble> acc;
      if (k == 0)
        acc = Tensor<cdouble>({"c"}, {2}, in[p] ? std::vector<cdouble>{0, 1} : std::vector<cdouble>{1, 0});
      else
        acc = Tensor<cdouble>({time_label(s, k - 1), "c"}, {2, 2}, {1, 0, 0, 1});
      for (int gi : per_block[p][k]) {
        const Gate& g = gates[gi];
        Tensor<cdouble> op;
        if (g.two_qubit()) {
          const FactoredGate& f = g.kind == GateKind::cz ? cz : iswap;
          op = g.q0 == s ? f.first : f.second;
          op.rename("v", virtual_label(gi));
        } else {
          op = gate_tensor(g.kind);
        }
        op.rename("in", "c");
        op.rename("out", "next");
        acc = contract(acc, op, {"c"}, local);
        acc.rename("next", "c");
      }
      acc.rename("c", k + 1 < K ? time_label(s, k) : output_label(s));
      if (k + 1 == K && out[p] >= 0) acc = slice(acc, {{output_label(s), static_cast<std::size_t>(out[p])}});
      net.tensors[p][k] = acc.template cast<T>();
    }
  };
  if (options.pool)
    options.pool->parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) build_site(p);
    });
  else
    for (std::size_t p = 0; p < n; ++p) build_site(p);
  return net;
}

template <class T>
GridNetwork2D<T> contract_time(const GridNetwork3D<T>& net, const Circuit& circuit, const ContractOptions& options) {
  const Lattice& lat = circuit.lattice();
  const auto& gates = circuit.gates();
  const std::size_t n = net.sites.size();
  if (n != lat.size()) throw std::invalid_argument("contract_time: network does not match circuit");

  GridNetwork2D<T> out;
  out.sites = net.sites;
  out.tensors.resize(n);
  for (int s : net.sites) out.members.push_back({s});
  ContractOptions local = without_pool(options);

  auto column = [&](std::size_t p) {
    const int s = net.sites[p];
    Tensor<T> acc = net.tensors[p][0];
    for (int k = 1; k < net.blocks; ++k) acc = contract(acc, net.tensors[p][k], {time_label(s, k - 1)}, local);

    // Group virtual indexes by the neighbor on the other end of the gate.
    std::vector<std::string> order, labels;
    std::vector<std::size_t> dims;
    for (int nb : lat.neighbors(s)) {
      std::size_t d = 1;
      for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        if (!g.two_qubit() || !((g.q0 == s && g.q1 == nb) || (g.q1 == s && g.q0 == nb))) continue;
        order.push_back(virtual_label(static_cast<int>(gi)));
        d *= acc.dim(order.back());
      }
      labels.push_back(bond_label(s, nb));
      dims.push_back(d);
    }
    if (acc.has(output_label(s))) {
      order.push_back(output_label(s));
      labels.push_back(output_label(s));
      dims.push_back(2);
    }
    acc = permute_to(acc, order, local);
    acc.reshape(std::move(labels), std::move(dims));
    out.tensors[p] = std::move(acc);
  };
  if (options.pool)
    options.pool->parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) column(p);
    });
  else
    for (std::size_t p = 0; p < n; ++p) column(p);

  for (auto [a, b] : lat.bonds()) out.bond_dims[{a, b}] = out.tensors[lat.position(a)].dim(bond_label(a, b));
  return out;
}

template <class T>
GridNetwork2D<T> fold_site(GridNetwork2D<T> net, int site, const ContractOptions& options) {
  int node = -1;
  for (std::size_t i = 0; i < net.sites.size(); ++i)
    if (net.sites[i] == site) node = static_cast<int>(i);
  if (node < 0) throw std::invalid_argument("fold_site: no node for site " + std::to_string(site));
  std::vector<std::pair<int, int>> bonds;
  for (const auto& [bond, dim] : net.bond_dims)
    if (bond.first == site || bond.second == site) bonds.push_back(bond);
  if (bonds.size() != 1) throw std::invalid_argument("fold_site: site must have exactly one neighbor");
  int nb = bonds[0].first == site ? bonds[0].second : bonds[0].first;
  int host = -1;
  for (std::size_t i = 0; i < net.sites.size(); ++i)
    if (net.sites[i] == nb) host = static_cast<int>(i);
  net.tensors[host] = contract(net.tensors[host], net.tensors[node], {bond_label(site, nb)}, options);
  net.members[host].insert(net.members[host].end(), net.members[node].begin(), net.members[node].end());
  net.bond_dims.erase(bonds[0]);
  net.sites.erase(net.sites.begin() + node);
  net.members.erase(net.members.begin() + node);
  net.tensors.erase(net.tensors.begin() + node);
  return net;
}

template <class T>
GridNetwork2D<T> build_2d(const Circuit& circuit, const Bits& in, const ContractOptions& options) {
  GridNetwork2D<T> net =
      contract_time(build_3d<T>(circuit, in, all_open(circuit.num_qubits()), options), circuit, options);
  const Lattice& lat = circuit.lattice();
  if (lat.kind() == Lattice::Kind::bristlecone && lat.size() == 72)
    for (int s : lat.site_ids())
      if (lat.neighbors(s).size() == 1) net = fold_site(std::move(net), s, options);
  return net;
}

template <class T>
Tensor<T> contract_network(const GridNetwork2D<T>& net, const OutputPattern& out, const ContractOptions& options) {
  std::vector<int> all_sites;
  for (const auto& m : net.members) all_sites.insert(all_sites.end(), m.begin(), m.end());
  std::sort(all_sites.begin(), all_sites.end());
  if (out.size() != all_sites.size()) throw std::invalid_argument("output pattern length mismatch");
  auto bit_of = [&](int site) {
    return out[std::lower_bound(all_sites.begin(), all_sites.end(), site) - all_sites.begin()];
  };
  std::vector<std::size_t> order(net.sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return net.sites[x] < net.sites[y]; });

  Tensor<T> acc = Tensor<T>::scalar(T(1));
  for (std::size_t i : order) {
    std::vector<std::pair<std::string, std::size_t>> fixed;
    for (int m : net.members[i])
      if (bit_of(m) >= 0) fixed.emplace_back(output_label(m), static_cast<std::size_t>(bit_of(m)));
    acc = contract(acc, slice(net.tensors[i], fixed), options);
  }
  return acc;
}

template <class T>
Tensor<T> contract_network(const GridNetwork3D<T>& net, const ContractOptions& options) {
  Tensor<T> acc = Tensor<T>::scalar(T(1));
  for (const auto& column : net.tensors)
    for (const auto& t : column) acc = contract(acc, t, options);
  return acc;
}

template <class T>
Tensor<T> contract_gate_network(const Circuit& circuit, const Bits& in, const OutputPattern& out,
                                const ContractOptions& options) {
  check_pattern(circuit, in, out);
  const Lattice& lat = circuit.lattice();
  const std::size_t n = lat.size();
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < n; ++p) labels.push_back("w" + std::to_string(p));
  Tensor<T> state(labels, std::vector<std::size_t>(n, 2));
  state.data()[bits_to_index(in)] = T(1);

  for (const Gate& g : circuit.gates()) {
    Tensor<T> op = gate_tensor(g.kind).template cast<T>();
    std::string w0 = "w" + std::to_string(lat.position(g.q0));
    if (g.two_qubit()) {
      std::string w1 = "w" + std::to_string(lat.position(g.q1));
      op.rename("in0", w0);
      op.rename("in1", w1);
      op.rename("out0", "n0");
      op.rename("out1", "n1");
      state = contract(state, op, {w0, w1}, options);
      state.rename("n0", w0);
      state.rename("n1", w1);
    } else {
      op.rename("in", w0);
      op.rename("out", "n0");
      state = contract(state, op, {w0}, options);
      state.rename("n0", w0);
    }
  }
  std::vector<std::pair<std::string, std::size_t>> fixed;
  std::vector<std::string> open;
  for (std::size_t p = 0; p < n; ++p) {
    if (out[p] >= 0)
      fixed.emplace_back("w" + std::to_string(p), static_cast<std::size_t>(out[p]));
    else
      open.push_back("w" + std::to_string(p));
  }
  state = permute_to(slice(state, fixed), open, options);
  for (const auto& w : open) state.rename(w, output_label(lat.site_ids()[std::stoul(w.substr(1))]));
  return state;
}

#define RQCSIM_INSTANTIATE(T)                                                                                    \
  template struct GridNetwork2D<T>;                                                                              \
  template GridNetwork3D<T> build_3d(const Circuit&, const Bits&, const OutputPattern&, const ContractOptions&); \
  template GridNetwork2D<T> contract_time(const GridNetwork3D<T>&, const Circuit&, const ContractOptions&);     \
  template GridNetwork2D<T> build_2d(const Circuit&, const Bits&, const ContractOptions&);                      \
  template GridNetwork2D<T> fold_site(GridNetwork2D<T>, int, const ContractOptions&);                           \
  template Tensor<T> contract_network(const GridNetwork2D<T>&, const OutputPattern&, const ContractOptions&);   \
  template Tensor<T> contract_network(const GridNetwork3D<T>&, const ContractOptions&);                         \
  template Tensor<T> contract_gate_network(const Circuit&, const Bits&, const OutputPattern&, const ContractOptions&);

RQCSIM_INSTANTIATE(cfloat)
RQCSIM_INSTANTIATE(cdouble)

}  // namespace rqcsim
