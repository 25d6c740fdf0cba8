#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rqcsim/bits.h"
#include "rqcsim/circuit.h"
#include "rqcsim/contract.h"
#include "rqcsim/tensor.h"

namespace rqcsim {

// Per-qubit output constraint: 0 or 1 fixes the bit, -1 keeps the output
// index open (label "o<site>").
using OutputPattern = std::vector<int>;
OutputPattern all_open(std::size_t n);
OutputPattern fixed_output(const Bits& bits);

std::string bond_label(int a, int b);
std::string output_label(int site);
std::string time_label(int site, int block);
std::string virtual_label(int gate_index);

// tensors[position][block]. Block tensors keep per-gate virtual indexes
// ("v<gate>", dimension = Schmidt rank) and time indexes between blocks.
template <class T>
struct GridNetwork3D {
  std::vector<int> sites;
  int blocks = 1;
  std::vector<std::vector<Tensor<T>>> tensors;
};

// One tensor per node. Node tensors carry "b<a>_<b>" bond indexes to every
// lattice neighbor (dimension 1 when no gate crossed the bond) plus open
// output indexes of their member sites. A node normally holds one site; a
// folded corner site joins its neighbor's node.
template <class T>
struct GridNetwork2D {
  std::vector<int> sites;
  std::vector<std::vector<int>> members;
  std::vector<Tensor<T>> tensors;
  std::map<std::pair<int, int>, std::size_t> bond_dims;

  int node_of(int site) const;
  std::size_t bond_dim(int a, int b) const;
};

template <class T>
GridNetwork3D<T> build_3d(const Circuit& circuit, const Bits& in, const OutputPattern& out,
                          const ContractOptions& options = {});

template <class T>
GridNetwork2D<T> contract_time(const GridNetwork3D<T>& net, const Circuit& circuit,
                               const ContractOptions& options = {});

// build_3d + contract_time with every output open. Bristlecone-72 corner
// sites are folded into their single neighbor.
template <class T>
GridNetwork2D<T> build_2d(const Circuit& circuit, const Bits& in, const ContractOptions& options = {});

template <class T>
GridNetwork2D<T> fold_site(GridNetwork2D<T> net, int site, const ContractOptions& options = {});

// Full contraction of a 2D network after fixing outputs (open entries stay
// as free indexes), accumulating nodes in ascending site order.
template <class T>
Tensor<T> contract_network(const GridNetwork2D<T>& net, const OutputPattern& out, const ContractOptions& options = {});

template <class T>
Tensor<T> contract_network(const GridNetwork3D<T>& net, const ContractOptions& options = {});

// Gate-by-gate contraction on a 2^n state tensor; reference route.
template <class T>
Tensor<T> contract_gate_network(const Circuit& circuit, const Bits& in, const OutputPattern& out,
                                const ContractOptions& options = {});

}  // namespace rqcsim
