#include "rqcsim/gemm.h"

#include <algorithm>
#include <complex>
#include <vector>

#include "rqcsim/tensor.h"
#include "rqcsim/thread_pool.h"

#ifdef RQCSIM_HAVE_CBLAS
#include <cblas.h>
#endif

namespace rqcsim {
namespace {

constexpr std::size_t kBlockK = 128;
constexpr std::size_t kBlockN = 256;

// Rows [row_begin, row_end) of C, on interleaved (re, im) storage. Manual
// complex arithmetic avoids the library's NaN-recovery path.
template <class R>
void gemm_rows(std::size_t row_begin, std::size_t row_end, std::size_t n, std::size_t k, const R* a, const R* b,
               R* c) {
  for (std::size_t i = row_begin; i < row_end; ++i) std::fill(c + 2 * i * n, c + 2 * (i + 1) * n, R(0));
  for (std::size_t j0 = 0; j0 < n; j0 += kBlockN) {
    std::size_t j1 = std::min(n, j0 + kBlockN);
    for (std::size_t p0 = 0; p0 < k; p0 += kBlockK) {
      std::size_t p1 = std::min(k, p0 + kBlockK);
      for (std::size_t i = row_begin; i < row_end; ++i) {
        R* ci = c + 2 * i * n;
        for (std::size_t p = p0; p < p1; ++p) {
          const R ar = a[2 * (i * k + p)];
          const R ai = a[2 * (i * k + p) + 1];
          const R* bp = b + 2 * p * n;
          for (std::size_t j = j0; j < j1; ++j) {
            const R br = bp[2 * j];
            const R bi = bp[2 * j + 1];
            ci[2 * j] += ar * br - ai * bi;
            ci[2 * j + 1] += ar * bi + ai * br;
          }
        }
      }
    }
  }
}

template <class T>
void gemm_blocked(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c, ThreadPool* pool) {
  using R = typename T::value_type;
  const R* ar = reinterpret_cast<const R*>(a);
  const R* br = reinterpret_cast<const R*>(b);
  R* cr = reinterpret_cast<R*>(c);
  auto body = [&](std::size_t lo, std::size_t hi) { gemm_rows(lo, hi, n, k, ar, br, cr); };
  // Split only when each task gets a meaningful amount of work.
  std::size_t work_per_row = std::max<std::size_t>(1, n * k);
  std::size_t min_rows = std::max<std::size_t>(1, (std::size_t{1} << 16) / work_per_row);
  if (pool)
    pool->parallel_for(m, body, min_rows);
  else
    body(0, m);
}

#ifdef RQCSIM_HAVE_CBLAS
void gemm_blas(std::size_t m, std::size_t n, std::size_t k, const cfloat* a, const cfloat* b, cfloat* c) {
  const cfloat one(1), zero(0);
  cblas_cgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m), static_cast<int>(n), static_cast<int>(k),
              &one, a, static_cast<int>(k), b, static_cast<int>(n), &zero, c, static_cast<int>(n));
}
void gemm_blas(std::size_t m, std::size_t n, std::size_t k, const cdouble* a, const cdouble* b, cdouble* c) {
  const cdouble one(1), zero(0);
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(m), static_cast<int>(n), static_cast<int>(k),
              &one, a, static_cast<int>(k), b, static_cast<int>(n), &zero, c, static_cast<int>(n));
}
#endif

}  // namespace

bool blas_available() {
#ifdef RQCSIM_HAVE_CBLAS
  return true;
#else
  return false;
#endif
}

void set_blas_threads(int threads) {
#if defined(RQCSIM_HAVE_CBLAS) && defined(OPENBLAS_VERSION)
  openblas_set_num_threads(std::max(1, threads));
#else
  (void)threads;
#endif
}

GemmBackend default_gemm_backend() { return blas_available() ? GemmBackend::blas : GemmBackend::blocked; }

std::string_view gemm_backend_name(GemmBackend backend) {
  return backend == GemmBackend::blas ? "blas" : "blocked";
}

template <class T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c, GemmBackend backend,
          ThreadPool* pool) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    std::fill(c, c + m * n, T(0));
    return;
  }
#ifdef RQCSIM_HAVE_CBLAS
  // BLAS takes int dimensions.
  constexpr std::size_t kIntMax = 0x7fffffff;
  if (backend == GemmBackend::blas && m <= kIntMax && n <= kIntMax && k <= kIntMax) {
    gemm_blas(m, n, k, a, b, c);
    return;
  }
#endif
  (void)backend;
  gemm_blocked(m, n, k, a, b, c, pool);
}

template void gemm(std::size_t, std::size_t, std::size_t, const cfloat*, const cfloat*, cfloat*, GemmBackend,
                   ThreadPool*);
template void gemm(std::size_t, std::size_t, std::size_t, const cdouble*, const cdouble*, cdouble*, GemmBackend,
                   ThreadPool*);

}  // namespace rqcsim
