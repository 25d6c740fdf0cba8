#pragma once

#include <string>
#include <vector>

#include "rqcsim/gemm.h"
#include "rqcsim/permute.h"
#include "rqcsim/tensor.h"

namespace rqcsim {

struct ContractOptions {
  ThreadPool* pool = nullptr;
  MoveMapCache* cache = &MoveMapCache::global();
  bool fast_permute = true;
  int mu = 5;
  int nu = 10;
  GemmBackend backend = default_gemm_backend();

  PermuteOptions permute_options() const { return {pool, cache}; }
};

// Reorder t's indexes to `order` with the configured permutation kernel.
template <class T>
Tensor<T> permute_to(const Tensor<T>& t, const std::vector<std::string>& order, const ContractOptions& options = {});

// Sum over the shared labels. Result labels are a's free labels followed
// by b's, each in their original order. Labels common to both tensors but
// not listed as shared are rejected.
template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, const std::vector<std::string>& shared,
                   const ContractOptions& options = {});

// Contract over every common label.
template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, const ContractOptions& options = {});

std::vector<std::string> common_labels(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace rqcsim
