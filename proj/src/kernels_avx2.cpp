// AVX2 + FMA variants of the lookup/accumulate kernels. This translation
// unit is the only one compiled with -mavx2 -mfma; it must not be entered
// unless avx2_available() said yes.

#include "mpems/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace mpems::kernels {

namespace {

struct Lanes {
  __m256d re;
  __m256d im;
};

// Bilinear sample of 4 (d1, d2) pairs. Same lerp form as the scalar kernel:
// (1-t)*a + t*b, exact at the nodes.
inline Lanes sample4(const LutPlane& p, __m256d d1, __m256d d2) {
  const __m256d lo = _mm256_set1_pd(p.lo);
  const __m256d inv_step = _mm256_set1_pd(1.0 / p.step);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();

  const __m256d s1 = _mm256_mul_pd(_mm256_sub_pd(d1, lo), inv_step);
  const __m256d s2 = _mm256_mul_pd(_mm256_sub_pd(d2, lo), inv_step);

  __m128i i0 = _mm256_cvttpd_epi32(s1);
  __m128i j0 = _mm256_cvttpd_epi32(s2);
  const __m128i cell_max = _mm_set1_epi32(p.res - 2);
  i0 = _mm_min_epi32(_mm_max_epi32(i0, _mm_setzero_si128()), cell_max);
  j0 = _mm_min_epi32(_mm_max_epi32(j0, _mm_setzero_si128()), cell_max);

  __m256d tx = _mm256_sub_pd(s1, _mm256_cvtepi32_pd(i0));
  __m256d ty = _mm256_sub_pd(s2, _mm256_cvtepi32_pd(j0));
  tx = _mm256_min_pd(_mm256_max_pd(tx, zero), one);
  ty = _mm256_min_pd(_mm256_max_pd(ty, zero), one);
  const __m256d omx = _mm256_sub_pd(one, tx);
  const __m256d omy = _mm256_sub_pd(one, ty);

  const __m128i base = _mm_add_epi32(_mm_mullo_epi32(i0, _mm_set1_epi32(p.res)), j0);
  const __m128i one_i = _mm_set1_epi32(1);
  const __m128i res_i = _mm_set1_epi32(p.res);
  const __m128i idx01 = _mm_add_epi32(base, one_i);
  const __m128i idx10 = _mm_add_epi32(base, res_i);
  const __m128i idx11 = _mm_add_epi32(idx10, one_i);

  const __m256d re00 = _mm256_i32gather_pd(p.re, base, 8);
  const __m256d re01 = _mm256_i32gather_pd(p.re, idx01, 8);
  const __m256d re10 = _mm256_i32gather_pd(p.re, idx10, 8);
  const __m256d re11 = _mm256_i32gather_pd(p.re, idx11, 8);
  const __m256d im00 = _mm256_i32gather_pd(p.im, base, 8);
  const __m256d im01 = _mm256_i32gather_pd(p.im, idx01, 8);
  const __m256d im10 = _mm256_i32gather_pd(p.im, idx10, 8);
  const __m256d im11 = _mm256_i32gather_pd(p.im, idx11, 8);

  const __m256d re0 = _mm256_fmadd_pd(ty, re01, _mm256_mul_pd(omy, re00));
  const __m256d re1 = _mm256_fmadd_pd(ty, re11, _mm256_mul_pd(omy, re10));
  const __m256d im0 = _mm256_fmadd_pd(ty, im01, _mm256_mul_pd(omy, im00));
  const __m256d im1 = _mm256_fmadd_pd(ty, im11, _mm256_mul_pd(omy, im10));

  Lanes out;
  out.re = _mm256_fmadd_pd(tx, re1, _mm256_mul_pd(omx, re0));
  out.im = _mm256_fmadd_pd(tx, im1, _mm256_mul_pd(omx, im0));
  return out;
}

// De-interleave [d1 d2 d1 d2 ...] for 4 cells into natural-order lanes.
inline void load_pairs(const double* d, __m256d& d1, __m256d& d2) {
  const __m256d p0 = _mm256_loadu_pd(d);     // d1_0 d2_0 d1_1 d2_1
  const __m256d p1 = _mm256_loadu_pd(d + 4); // d1_2 d2_2 d1_3 d2_3
  const __m256d lo = _mm256_unpacklo_pd(p0, p1); // d1_0 d1_2 d1_1 d1_3
  const __m256d hi = _mm256_unpackhi_pd(p0, p1); // d2_0 d2_2 d2_1 d2_3
  d1 = _mm256_permute4x64_pd(lo, 0xD8); // (0,2,1,3) -> natural order
  d2 = _mm256_permute4x64_pd(hi, 0xD8);
}

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  // Fixed lane order keeps the reduction deterministic.
  return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

} // namespace

void lut_lookup_batch_avx2(const LutPlane& plane, const double* d1,
                           const double* d2, std::size_t n, double* out_re,
                           double* out_im) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Lanes g = sample4(plane, _mm256_loadu_pd(d1 + i), _mm256_loadu_pd(d2 + i));
    _mm256_storeu_pd(out_re + i, g.re);
    _mm256_storeu_pd(out_im + i, g.im);
  }
  if (i < n) lut_lookup_batch_scalar(plane, d1 + i, d2 + i, n - i, out_re + i, out_im + i);
}

std::complex<double> steered_lut_sum_avx2(const LutPlane& plane, const double* d,
                                          std::size_t cells, const double* t_re,
                                          const double* t_im) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t c = 0;
  for (; c + 4 <= cells; c += 4) {
    __m256d d1, d2;
    load_pairs(d + 2 * c, d1, d2);
    const Lanes g = sample4(plane, d1, d2);
    const __m256d tr = _mm256_loadu_pd(t_re + c);
    const __m256d ti = _mm256_loadu_pd(t_im + c);
    acc_re = _mm256_fmadd_pd(g.re, tr, acc_re);
    acc_re = _mm256_fnmadd_pd(g.im, ti, acc_re);
    acc_im = _mm256_fmadd_pd(g.re, ti, acc_im);
    acc_im = _mm256_fmadd_pd(g.im, tr, acc_im);
  }
  std::complex<double> acc(hsum(acc_re), hsum(acc_im));
  if (c < cells) {
    acc += steered_lut_sum_scalar(plane, d + 2 * c, cells - c, t_re + c, t_im + c);
  }
  return acc;
}

} // namespace mpems::kernels

#endif // x86_64
