#include "mpems/kernels.hpp"

namespace mpems::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
#else
  return false;
#endif
}

Dispatch scalar_dispatch() {
  return {&lut_lookup_batch_scalar, &steered_lut_sum_scalar, "scalar"};
}

const Dispatch& active() {
  static const Dispatch selected = [] {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) {
      return Dispatch{&lut_lookup_batch_avx2, &steered_lut_sum_avx2, "avx2"};
    }
#endif
    return scalar_dispatch();
  }();
  return selected;
}

} // namespace mpems::kernels
