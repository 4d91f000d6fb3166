#include "latscat/simd/kernels.hpp"

namespace latscat::simd {

namespace {

// Written out by hand so the reference does not depend on how the compiler lowers
// std::complex multiplication (no NaN recovery branch, same term order as AVX2).
inline void mul_add(cdouble a, cdouble x, cdouble& y) {
  const double re = a.real() * x.real() - a.imag() * x.imag();
  const double im = a.real() * x.imag() + a.imag() * x.real();
  y = cdouble(y.real() + re, y.imag() + im);
}

void caxpy_scalar(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y) {
  for (std::size_t i = 0; i < n; ++i) mul_add(alpha, x[i], y[i]);
}

void cgemm_acc_scalar(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                      const cdouble* b, cdouble* c) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < k; ++p) {
      const cdouble bpj = b[p + j * k];
      const cdouble* acol = a + p * m;
      cdouble* ccol = c + j * m;
      for (std::size_t i = 0; i < m; ++i) mul_add(bpj, acol[i], ccol[i]);
    }
  }
}

constexpr KernelTable kScalar{Backend::scalar, "scalar", caxpy_scalar, cgemm_acc_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace latscat::simd
