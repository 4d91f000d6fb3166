#pragma once

// Complex double accumulation kernels behind the Volterra sums.
//
// Every routine has a portable scalar reference; an AVX2+FMA variant is compiled in a
// separate translation unit on x86-64 and picked at runtime when the CPU supports it.
// Both variants must agree to within a few ulps per term (see test_kernels.cpp).

#include <complex>
#include <cstddef>

namespace latscat::simd {

using cdouble = std::complex<double>;

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  // y[i] += alpha * x[i] for i < n.
  void (*caxpy)(std::size_t n, cdouble alpha, const cdouble* x, cdouble* y);
  // C += A * B with column-major A (m x k), B (k x n), C (m x n), leading dims = rows.
  void (*cgemm_acc)(std::size_t m, std::size_t k, std::size_t n, const cdouble* a,
                    const cdouble* b, cdouble* c);
};

const KernelTable& scalar_kernels();
// nullptr when the AVX2 translation unit was not built.
const KernelTable* avx2_kernels();
bool cpu_has_avx2();

// Best table for this machine; resolved once. Setting LATSCAT_FORCE_SCALAR=1 in the
// environment pins the scalar table.
const KernelTable& active_kernels();

}  // namespace latscat::simd
