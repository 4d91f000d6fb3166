#include "latscat/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace latscat::simd {

#if defined(LATSCAT_HAVE_AVX2_TU)
namespace detail {
const KernelTable& avx2_table();
}
#endif

bool cpu_has_avx2() {
#if defined(LATSCAT_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
#if defined(LATSCAT_HAVE_AVX2_TU)
  return &detail::avx2_table();
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* force = std::getenv("LATSCAT_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "0") != 0 && *force != '\0') {
      return scalar_kernels();
    }
    if (cpu_has_avx2() && avx2_kernels() != nullptr) return *avx2_kernels();
    return scalar_kernels();
  }();
  return table;
}

}  // namespace latscat::simd
