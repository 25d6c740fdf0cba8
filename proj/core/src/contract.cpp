#include "rqcsim/contract.h"

#include <algorithm>
#include <stdexcept>

namespace rqcsim {

std::vector<std::string> common_labels(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto& l : a)
    if (std::find(b.begin(), b.end(), l) != b.end()) out.push_back(l);
  return out;
}

template <class T>
Tensor<T> permute_to(const Tensor<T>& t, const std::vector<std::string>& order, const ContractOptions& options) {
  std::vector<int> perm = permutation_to(t.labels(), order);
  if (!options.fast_permute) return permute_naive(t, perm);
  PermutePlan plan = plan_permutation(t.dims(), perm, options.mu, options.nu);
  return permute_fast(t, plan, options.permute_options());
}

namespace {

bool has_layout(const std::vector<std::string>& labels, const std::vector<std::string>& order) {
  return labels == order;
}

bool same_set(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, const std::vector<std::string>& shared,
                   const ContractOptions& options) {
  for (const auto& l : shared) {
    int ia = a.find(l), ib = b.find(l);
    if (ia < 0 || ib < 0) throw std::invalid_argument("contract: shared label " + l + " missing");
    if (a.dims()[ia] != b.dims()[ib]) throw std::invalid_argument("contract: dimension mismatch on " + l);
  }
  std::vector<std::string> free_a, free_b;
  std::vector<std::size_t> dims_out;
  std::size_t m = 1, n = 1, k = 1;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (std::find(shared.begin(), shared.end(), a.labels()[i]) != shared.end()) continue;
    if (b.has(a.labels()[i])) throw std::invalid_argument("contract: label " + a.labels()[i] + " is in both tensors");
    free_a.push_back(a.labels()[i]);
    dims_out.push_back(a.dims()[i]);
    m *= a.dims()[i];
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (std::find(shared.begin(), shared.end(), b.labels()[i]) != shared.end()) continue;
    free_b.push_back(b.labels()[i]);
    dims_out.push_back(b.dims()[i]);
    n *= b.dims()[i];
  }
  for (const auto& l : shared) k *= a.dim(l);

  // Pick the shared order that spares a permutation when possible.
  std::vector<std::string> order = shared;
  std::vector<std::string> a_tail(a.labels().end() - static_cast<long>(shared.size()), a.labels().end());
  std::vector<std::string> b_head(b.labels().begin(), b.labels().begin() + static_cast<long>(shared.size()));
  if (same_set(a_tail, shared))
    order = a_tail;
  else if (same_set(b_head, shared))
    order = b_head;

  std::vector<std::string> a_order = free_a;
  a_order.insert(a_order.end(), order.begin(), order.end());
  std::vector<std::string> b_order = order;
  b_order.insert(b_order.end(), free_b.begin(), free_b.end());

  Tensor<T> a_perm, b_perm;
  const T* pa = a.data().data();
  const T* pb = b.data().data();
  if (!has_layout(a.labels(), a_order)) {
    a_perm = permute_to(a, a_order, options);
    pa = a_perm.data().data();
  }
  if (!has_layout(b.labels(), b_order)) {
    b_perm = permute_to(b, b_order, options);
    pb = b_perm.data().data();
  }

  std::vector<std::string> labels = free_a;
  labels.insert(labels.end(), free_b.begin(), free_b.end());
  Tensor<T> out(std::move(labels), std::move(dims_out));
  gemm(m, n, k, pa, pb, out.data().data(), options.backend, options.pool);
  return out;
}

template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, const ContractOptions& options) {
  return contract(a, b, common_labels(a.labels(), b.labels()), options);
}

template Tensor<cfloat> permute_to(const Tensor<cfloat>&, const std::vector<std::string>&, const ContractOptions&);
template Tensor<cdouble> permute_to(const Tensor<cdouble>&, const std::vector<std::string>&, const ContractOptions&);
template Tensor<cfloat> contract(const Tensor<cfloat>&, const Tensor<cfloat>&, const std::vector<std::string>&,
                                 const ContractOptions&);
template Tensor<cdouble> contract(const Tensor<cdouble>&, const Tensor<cdouble>&, const std::vector<std::string>&,
                                  const ContractOptions&);
template Tensor<cfloat> contract(const Tensor<cfloat>&, const Tensor<cfloat>&, const ContractOptions&);
template Tensor<cdouble> contract(const Tensor<cdouble>&, const Tensor<cdouble>&, const ContractOptions&);

}  // namespace rqcsim
