#pragma once

#include <complex>
#include <cstddef>

namespace mpems::kernels {

// One complex channel of a reflection lookup table: res x res nodes over
// [lo, lo + (res-1)*step]^2 in (d1, d2), value at (i, j) stored at
// re[i*res + j] (i indexes d1, j indexes d2).
struct LutPlane {
  const double* re = nullptr;
  const double* im = nullptr;
  int res = 0;
  double lo = 0.0;
  double step = 0.0;
};

// Bilinear sample of both channels at each (d1[i], d2[i]). Queries are
// clamped to the node box; callers bounds-check before getting here.
void lut_lookup_batch_scalar(const LutPlane& plane, const double* d1,
                             const double* d2, std::size_t n, double* out_re,
                             double* out_im);

// sum_c Gamma(d[2c], d[2c+1]) * (t_re[c] + j t_im[c]) over `cells`
// interleaved descriptor pairs. This is the synthesis hot loop: one call per
// candidate layout per polarization.
std::complex<double> steered_lut_sum_scalar(const LutPlane& plane,
                                            const double* d_interleaved,
                                            std::size_t cells,
                                            const double* t_re,
                                            const double* t_im);

#if defined(__x86_64__) || defined(_M_X64)
void lut_lookup_batch_avx2(const LutPlane& plane, const double* d1,
                           const double* d2, std::size_t n, double* out_re,
                           double* out_im);
std::complex<double> steered_lut_sum_avx2(const LutPlane& plane,
                                          const double* d_interleaved,
                                          std::size_t cells, const double* t_re,
                                          const double* t_im);
#endif

using LookupBatchFn = void (*)(const LutPlane&, const double*, const double*,
                               std::size_t, double*, double*);
using SteeredSumFn = std::complex<double> (*)(const LutPlane&, const double*,
                                              std::size_t, const double*,
                                              const double*);

struct Dispatch {
  LookupBatchFn lookup_batch = nullptr;
  SteeredSumFn steered_sum = nullptr;
  const char* name = "";
};

bool avx2_available();
Dispatch scalar_dispatch();

// Best variant for the running CPU, chosen once per process.
const Dispatch& active();

} // namespace mpems::kernels
