#include "rqcsim/oracle.h"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "rqcsim/errors.h"
#include "rqcsim/thread_pool.h"

namespace rqcsim {

StateVector::StateVector(std::size_t n, std::size_t max_qubits) : n_(n) {
  if (n > max_qubits)
    throw ResourceError("state vector of " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(max_qubits));
  amps_.assign(std::size_t{1} << n, cdouble(0));
  amps_[0] = 1;
}

StateVector StateVector::basis(const Bits& bits, std::size_t max_qubits) {
  StateVector s(bits.size(), max_qubits);
  s.amps_[0] = 0;
  s.amps_[bits_to_index(bits)] = 1;
  return s;
}

double StateVector::norm_squared() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

namespace {

// Plain real arithmetic: std::complex multiplication carries NaN recovery
// that dominates the inner loops here.
inline cdouble mul(cdouble a, cdouble b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

template <std::size_t N>
bool is_diagonal(const std::array<cdouble, N * N>& m) {
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c)
      if (r != c && m[r * N + c] != cdouble(0)) return false;
  return true;
}

void apply_1q(cdouble* a, std::size_t bit, const Matrix2& m, bool diagonal, std::size_t lo, std::size_t hi) {
  for (std::size_t k = lo; k < hi; ++k) {
    // Insert a zero at the target bit to enumerate pair bases.
    const std::size_t i0 = ((k & ~(bit - 1)) << 1) | (k & (bit - 1));
    const std::size_t i1 = i0 | bit;
    const cdouble a0 = a[i0], a1 = a[i1];
    if (diagonal) {
      a[i0] = mul(m[0], a0);
      a[i1] = mul(m[3], a1);
    } else {
      a[i0] = mul(m[0], a0) + mul(m[1], a1);
      a[i1] = mul(m[2], a0) + mul(m[3], a1);
    }
  }
}

void apply_2q(cdouble* a, std::size_t b0, std::size_t b1, const Matrix4& m, bool diagonal, std::size_t lo,
              std::size_t hi) {
  const std::size_t lo_bit = std::min(b0, b1), hi_bit = std::max(b0, b1);
  for (std::size_t k = lo; k < hi; ++k) {
    std::size_t i = ((k & ~(lo_bit - 1)) << 1) | (k & (lo_bit - 1));
    i = ((i & ~(hi_bit - 1)) << 1) | (i & (hi_bit - 1));
    const std::size_t idx[4] = {i, i | b1, i | b0, i | b0 | b1};
    if (diagonal) {
      for (int r = 0; r < 4; ++r)
        if (m[5 * r] != cdouble(1)) a[idx[r]] = mul(m[5 * r], a[idx[r]]);
      continue;
    }
    cdouble v[4];
    for (int r = 0; r < 4; ++r) v[r] = a[idx[r]];
    for (int r = 0; r < 4; ++r)
      a[idx[r]] = mul(m[4 * r], v[0]) + mul(m[4 * r + 1], v[1]) + mul(m[4 * r + 2], v[2]) + mul(m[4 * r + 3], v[3]);
  }
}

// A gate resolved to amplitude-index bits.
struct BoundGate {
  std::size_t b0 = 0;
  std::size_t b1 = 0;  // 0 for single-qubit gates
  Matrix2 m2{};
  Matrix4 m4{};
  bool diagonal = false;
};

BoundGate bind(const Gate& g, const Lattice& lat, std::size_t n) {
  BoundGate b;
  b.b0 = std::size_t{1} << (n - 1 - static_cast<std::size_t>(lat.position(g.q0)));
  if (g.two_qubit()) {
    b.b1 = std::size_t{1} << (n - 1 - static_cast<std::size_t>(lat.position(g.q1)));
    b.m4 = two_qubit_matrix(g.kind);
    b.diagonal = is_diagonal<4>(b.m4);
  } else {
    b.m2 = single_qubit_matrix(g.kind);
    b.diagonal = is_diagonal<2>(b.m2);
  }
  return b;
}

void apply_bound(cdouble* a, std::size_t size, const BoundGate& g) {
  if (g.b1)
    apply_2q(a, g.b0, g.b1, g.m4, g.diagonal, 0, size / 4);
  else
    apply_1q(a, g.b0, g.m2, g.diagonal, 0, size / 2);
}

}  // namespace

void StateVector::apply(int position, const Matrix2& m, ThreadPool* pool) {
  if (position < 0 || static_cast<std::size_t>(position) >= n_) throw std::out_of_range("qubit position out of range");
  const std::size_t bit = std::size_t{1} << (n_ - 1 - position);
  const bool diagonal = is_diagonal<2>(m);
  cdouble* a = amps_.data();
  auto body = [&](std::size_t lo, std::size_t hi) { apply_1q(a, bit, m, diagonal, lo, hi); };
  if (pool)
    pool->parallel_for(amps_.size() / 2, body, 1 << 14);
  else
    body(0, amps_.size() / 2);
}

void StateVector::apply(int pos0, int pos1, const Matrix4& m, ThreadPool* pool) {
  if (pos0 == pos1) throw std::invalid_argument("two-qubit gate on one qubit");
  for (int p : {pos0, pos1})
    if (p < 0 || static_cast<std::size_t>(p) >= n_) throw std::out_of_range("qubit position out of range");
  const std::size_t b0 = std::size_t{1} << (n_ - 1 - pos0);
  const std::size_t b1 = std::size_t{1} << (n_ - 1 - pos1);
  const bool diagonal = is_diagonal<4>(m);
  cdouble* a = amps_.data();
  auto body = [&](std::size_t lo, std::size_t hi) { apply_2q(a, b0, b1, m, diagonal, lo, hi); };
  if (pool)
    pool->parallel_for(amps_.size() / 4, body, 1 << 13);
  else
    body(0, amps_.size() / 4);
}

StateVector evolve(const Circuit& circuit, const Bits& in, const OracleOptions& options) {
  if (in.size() != circuit.num_qubits()) throw std::invalid_argument("input bit-string length mismatch");
  StateVector s = StateVector::basis(in, options.max_qubits);
  const Lattice& lat = circuit.lattice();
  const std::size_t n = s.num_qubits();
  // Gates of one cycle commute. Those acting only on the low index bits are
  // applied block by block so each block stays in cache for all of them.
  const std::size_t block_bits = std::min<std::size_t>(n, 13);
  const std::size_t block = std::size_t{1} << block_bits;
  const auto& gates = circuit.gates();
  cdouble* a = s.amplitudes().data();
  const std::size_t size = s.amplitudes().size();
  for (std::size_t i = 0; i < gates.size();) {
    std::size_t j = i;
    while (j < gates.size() && gates[j].cycle == gates[i].cycle) ++j;
    std::vector<BoundGate> local;
    for (std::size_t k = i; k < j; ++k) {
      BoundGate g = bind(gates[k], lat, n);
      if (g.b0 < block && g.b1 < block) {
        local.push_back(g);
      } else if (gates[k].two_qubit()) {
        s.apply(lat.position(gates[k].q0), lat.position(gates[k].q1), g.m4, options.pool);
      } else {
        s.apply(lat.position(gates[k].q0), g.m2, options.pool);
      }
    }
    if (!local.empty()) {
      auto body = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c)
          for (const auto& g : local) apply_bound(a + c * block, block, g);
      };
      if (options.pool)
        options.pool->parallel_for(size / block, body, 1);
      else
        body(0, size / block);
    }
    i = j;
  }
  return s;
}

cdouble exact_amplitude(const Circuit& circuit, const Bits& in, const Bits& out, const OracleOptions& options) {
  if (out.size() != circuit.num_qubits()) throw std::invalid_argument("output bit-string length mismatch");
  StateVector s = evolve(circuit, in, options);
  return s.amplitudes()[bits_to_index(out)];
}

std::vector<double> exact_distribution(const Circuit& circuit, const Bits& in, const OracleOptions& options) {
  StateVector s = evolve(circuit, in, options);
  std::vector<double> p(s.amplitudes().size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amplitudes()[i]);
  return p;
}

}  // namespace rqcsim
