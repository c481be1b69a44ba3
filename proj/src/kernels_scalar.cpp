#include "mpems/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace mpems::kernels {

namespace {

struct BilinearCoords {
  int i0, j0;
  double tx, ty;
};

// The (1-t)*a + t*b form is exact at t = 0 and t = 1, so node queries
// reproduce node values bit-for-bit.
inline double lerp(double a, double b, double t) {
  return (1.0 - t) * a + t * b;
}

inline BilinearCoords locate(const LutPlane& p, double d1, double d2) {
  const double s1 = (d1 - p.lo) / p.step;
  const double s2 = (d2 - p.lo) / p.step;
  int i0 = static_cast<int>(s1);
  int j0 = static_cast<int>(s2);
  i0 = std::clamp(i0, 0, p.res - 2);
  j0 = std::clamp(j0, 0, p.res - 2);
  const double tx = std::clamp(s1 - i0, 0.0, 1.0);
  const double ty = std::clamp(s2 - j0, 0.0, 1.0);
  return {i0, j0, tx, ty};
}

inline void sample(const LutPlane& p, double d1, double d2, double& out_re,
                   double& out_im) {
  const auto c = locate(p, d1, d2);
  const int base = c.i0 * p.res + c.j0;
  const double re0 = lerp(p.re[base], p.re[base + 1], c.ty);
  const double re1 = lerp(p.re[base + p.res], p.re[base + p.res + 1], c.ty);
  const double im0 = lerp(p.im[base], p.im[base + 1], c.ty);
  const double im1 = lerp(p.im[base + p.res], p.im[base + p.res + 1], c.ty);
  out_re = lerp(re0, re1, c.tx);
  out_im = lerp(im0, im1, c.tx);
}

} // namespace

void lut_lookup_batch_scalar(const LutPlane& plane, const double* d1,
                             const double* d2, std::size_t n, double* out_re,
                             double* out_im) {
  for (std::size_t i = 0; i < n; ++i) {
    sample(plane, d1[i], d2[i], out_re[i], out_im[i]);
  }
}

std::complex<double> steered_lut_sum_scalar(const LutPlane& plane,
                                            const double* d, std::size_t cells,
                                            const double* t_re,
                                            const double* t_im) {
  double acc_re = 0.0, acc_im = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double g_re, g_im;
    sample(plane, d[2 * c], d[2 * c + 1], g_re, g_im);
    acc_re += g_re * t_re[c] - g_im * t_im[c];
    acc_im += g_re * t_im[c] + g_im * t_re[c];
  }
  return {acc_re, acc_im};
}

} // namespace mpems::kernels
