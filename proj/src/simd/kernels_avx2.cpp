// Compiled with -mavx2 -mfma. Nothing in here may run before the runtime CPU check in
// kernels.cpp, so this file must stay free of static initializers and of headers that
// instantiate vectorized inline code used elsewhere (Eigen in particular).
#include <immintrin.h>

#include "latscat/simd/kernels.hpp"

namespace latscat::simd::detail {

namespace {

// Two complex doubles per register, laid out (re0, im0, re1, im1).
// alpha * x = (ar*xr - ai*xi, ar*xi + ai*xr): fmaddsub(ar, x, ai * swap(x)).
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);
  const __m256d t = _mm256_mul_pd(ai, xs);
  return _mm256_fmaddsub_pd(ar, x, t);
}

inline void mul_add_tail(cdouble a, cdouble x, cdouble& y) {
  const double re = a.real() * x.real() - a.imag() * x.imag();
  const double im = a.real() * x.imag() + a.imag() * x.real();
  y = cdouble(y.real() + re, y.imag() + im);
}

void caxpy_avx2(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul(ar, ai, x0)));
    _mm256_storeu_pd(yd + 2 * i + 4, _mm256_add_pd(y1, cmul(ar, ai, x1)));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y0, cmul(ar, ai, x0)));
  }
  for (; i < n; ++i) mul_add_tail(alpha, x[i], y[i]);
}

void cgemm_acc_avx2(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                    const cdouble* b, cdouble* c) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < k; ++p) caxpy_avx2(m, b[p + j * k], a + p * m, c + j * m);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static constexpr KernelTable table{Backend::avx2, "avx2", caxpy_avx2, cgemm_acc_avx2};
  return table;
}

}  // namespace latscat::simd::detail
