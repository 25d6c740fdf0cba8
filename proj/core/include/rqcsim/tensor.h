#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rqcsim {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

// Dense row-major tensor with named indexes. Every index dimension is a
// power of two so indexes decompose into binary ones.
template <class T>
class Tensor {
 public:
  using value_type = T;

  Tensor() : data_(1, T(0)) {}
  Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims);
  Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims, std::vector<T> data);

  static Tensor scalar(T value);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return labels_.size(); }
  std::size_t size() const { return data_.size(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  T scalar_value() const;

  // Position of a label, or -1.
  int find(std::string_view label) const;
  bool has(std::string_view label) const { return find(label) >= 0; }
  std::size_t dim(std::string_view label) const;

  void rename(std::string_view from, std::string to);
  // Reinterpret the data with new labels and dims of equal total size.
  void reshape(std::vector<std::string> labels, std::vector<std::size_t> dims);

  T& at(std::span<const std::size_t> index);
  const T& at(std::span<const std::size_t> index) const;

  Tensor& operator*=(T factor);
  Tensor conj() const;

  template <class U>
  Tensor<U> cast() const {
    std::vector<U> d(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) d[i] = U(data_[i]);
    return Tensor<U>(labels_, dims_, std::move(d));
  }

 private:
  void check() const;

  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
  std::vector<T> data_;
};

bool is_power_of_two(std::size_t x);
int log2_exact(std::size_t x);

// Fix some labels to given values; the remaining labels keep their order.
template <class T>
Tensor<T> slice(const Tensor<T>& t, const std::vector<std::pair<std::string, std::size_t>>& fixed);

extern template class Tensor<cfloat>;
extern template class Tensor<cdouble>;

}  // namespace rqcsim
