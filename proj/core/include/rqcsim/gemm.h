#pragma once

#include <cstddef>
#include <string_view>

namespace rqcsim {

class ThreadPool;

enum class GemmBackend { blocked, blas };

bool blas_available();
GemmBackend default_gemm_backend();
// Thread count used inside the BLAS library itself, when it exposes one.
void set_blas_threads(int threads);
std::string_view gemm_backend_name(GemmBackend backend);

// C[m x n] = A[m x k] * B[k x n], all row-major and contiguous. The blocked
// backend splits rows of C across the pool; each entry is accumulated in a
// fixed order, so results do not depend on the thread count.
template <class T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c, GemmBackend backend,
          ThreadPool* pool = nullptr);

}  // namespace rqcsim
