#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rqcsim/bits.h"
#include "rqcsim/circuit.h"
#include "rqcsim/tensor.h"

namespace rqcsim {

class ThreadPool;

struct OracleOptions {
  std::size_t max_qubits = 26;
  ThreadPool* pool = nullptr;
};

// Dense double-precision state. Qubit position i is bit (n - 1 - i) of the
// amplitude index, so bits_to_index gives the index of a bit-string.
class StateVector {
 public:
  explicit StateVector(std::size_t n, std::size_t max_qubits = 26);
  static StateVector basis(const Bits& bits, std::size_t max_qubits = 26);

  std::size_t num_qubits() const { return n_; }
  std::span<const cdouble> amplitudes() const { return amps_; }
  std::span<cdouble> amplitudes() { return amps_; }
  double norm_squared() const;

  void apply(int position, const Matrix2& m, ThreadPool* pool = nullptr);
  void apply(int pos0, int pos1, const Matrix4& m, ThreadPool* pool = nullptr);

 private:
  std::size_t n_;
  std::vector<cdouble> amps_;
};

// Apply the circuit's gates in cycle order to |in>.
StateVector evolve(const Circuit& circuit, const Bits& in, const OracleOptions& options = {});
cdouble exact_amplitude(const Circuit& circuit, const Bits& in, const Bits& out, const OracleOptions& options = {});
std::vector<double> exact_distribution(const Circuit& circuit, const Bits& in, const OracleOptions& options = {});

}  // namespace rqcsim
