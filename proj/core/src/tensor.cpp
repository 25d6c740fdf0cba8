#include "rqcsim/tensor.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace rqcsim {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

int log2_exact(std::size_t x) {
  if (!is_power_of_two(x)) throw std::invalid_argument("dimension " + std::to_string(x) + " is not a power of two");
  int k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  return k;
}

template <class T>
Tensor<T>::Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  std::size_t n = 1;
  for (auto d : dims_) n *= d;
  data_.assign(n, T(0));
  check();
}

template <class T>
Tensor<T>::Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims, std::vector<T> data)
    : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
  check();
}

template <class T>
Tensor<T> Tensor<T>::scalar(T value) {
  return Tensor({}, {}, std::vector<T>{value});
}

template <class T>
void Tensor<T>::check() const {
  if (labels_.size() != dims_.size()) throw std::invalid_argument("tensor: labels and dims differ in length");
  std::size_t n = 1;
  for (auto d : dims_) {
    if (!is_power_of_two(d)) throw std::invalid_argument("tensor: dimension " + std::to_string(d) + " is not a power of two");
    n *= d;
  }
  if (n != data_.size()) throw std::invalid_argument("tensor: data length does not match dims");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw std::invalid_argument("tensor: duplicate label " + l);
}

template <class T>
T Tensor<T>::scalar_value() const {
  if (data_.size() != 1) throw std::logic_error("tensor is not a scalar");
  return data_[0];
}

template <class T>
int Tensor<T>::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

template <class T>
std::size_t Tensor<T>::dim(std::string_view label) const {
  int i = find(label);
  if (i < 0) throw std::invalid_argument("tensor has no label " + std::string(label));
  return dims_[i];
}

template <class T>
void Tensor<T>::rename(std::string_view from, std::string to) {
  int i = find(from);
  if (i < 0) throw std::invalid_argument("tensor has no label " + std::string(from));
  if (from != to && has(to)) throw std::invalid_argument("tensor already has label " + to);
  labels_[i] = std::move(to);
}

template <class T>
void Tensor<T>::reshape(std::vector<std::string> labels, std::vector<std::size_t> dims) {
  auto old_labels = std::move(labels_);
  auto old_dims = std::move(dims_);
  labels_ = std::move(labels);
  dims_ = std::move(dims);
  try {
    check();
  } catch (...) {
    labels_ = std::move(old_labels);
    dims_ = std::move(old_dims);
    throw;
  }
}

template <class T>
T& Tensor<T>::at(std::span<const std::size_t> index) {
  return const_cast<T&>(std::as_const(*this).at(index));
}

template <class T>
const T& Tensor<T>::at(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw std::invalid_argument("tensor index has wrong rank");
  std::size_t off = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (index[i] >= dims_[i]) throw std::out_of_range("tensor index out of range");
    off = off * dims_[i] + index[i];
  }
  return data_[off];
}

template <class T>
Tensor<T>& Tensor<T>::operator*=(T factor) {
  for (auto& x : data_) x *= factor;
  return *this;
}

template <class T>
Tensor<T> Tensor<T>::conj() const {
  Tensor out = *this;
  for (auto& x : out.data_) x = std::conj(x);
  return out;
}

template <class T>
Tensor<T> slice(const Tensor<T>& t, const std::vector<std::pair<std::string, std::size_t>>& fixed) {
  if (fixed.empty()) return t;
  const std::size_t r = t.rank();
  std::vector<std::size_t> value(r, 0);
  std::vector<bool> is_fixed(r, false);
  for (const auto& [label, v] : fixed) {
    int i = t.find(label);
    if (i < 0) throw std::invalid_argument("slice: no label " + label);
    if (is_fixed[i]) throw std::invalid_argument("slice: label fixed twice: " + label);
    if (v >= t.dims()[i]) throw std::out_of_range("slice: value out of range for " + label);
    is_fixed[i] = true;
    value[i] = v;
  }
  std::vector<std::size_t> strides(r, 1);
  for (std::size_t i = r; i-- > 1;) strides[i - 1] = strides[i] * t.dims()[i];

  std::size_t base = 0;
  std::vector<std::string> labels;
  std::vector<std::size_t> dims, free_strides;
  for (std::size_t i = 0; i < r; ++i) {
    if (is_fixed[i]) {
      base += value[i] * strides[i];
    } else {
      labels.push_back(t.labels()[i]);
      dims.push_back(t.dims()[i]);
      free_strides.push_back(strides[i]);
    }
  }
  Tensor<T> out(std::move(labels), dims);
  auto src = t.data();
  auto dst = out.data();
  // Contiguous innermost run: trailing free indexes with natural strides.
  std::size_t run = 1;
  std::size_t k = dims.size();
  while (k > 0 && free_strides[k - 1] == run) {
    run *= dims[k - 1];
    --k;
  }
  std::vector<std::size_t> ctr(k, 0);
  std::size_t outer = dst.size() / run;
  std::size_t off = base;
  for (std::size_t o = 0; o < outer; ++o) {
    std::copy_n(src.begin() + off, run, dst.begin() + o * run);
    for (std::size_t j = k; j-- > 0;) {
      off += free_strides[j];
      if (++ctr[j] < dims[j]) break;
      off -= free_strides[j] * dims[j];
      ctr[j] = 0;
    }
  }
  return out;
}

template class Tensor<cfloat>;
template class Tensor<cdouble>;
template Tensor<cfloat> slice(const Tensor<cfloat>&, const std::vector<std::pair<std::string, std::size_t>>&);
template Tensor<cdouble> slice(const Tensor<cdouble>&, const std::vector<std::pair<std::string, std::size_t>>&);

}  // namespace rqcsim
