// Independent reference computations used by the unit and acceptance
// suites. Everything here is coded from the physical definitions with its
// own vector math and numerical quadrature; none of it calls the library's
// field-evaluation path, so agreement is evidence rather than tautology.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cdouble = std::complex<double>;
using Vec3 = std::array<cdouble, 3>;

constexpr double kC0 = 299792458.0;
constexpr double kPi = 3.14159265358979323846264338327950288;

inline double deg(double d) { return d * kPi / 180.0; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 scale(const Vec3& a, cdouble s) {
  return {a[0] * s, a[1] * s, a[2] * s};
}

inline Vec3 add(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline double norm(const Vec3& a) {
  return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

struct Wave {
  bool te = true;
  double theta_inc_deg = 0.0;
  double phi_inc_deg = 0.0;
  cdouble amplitude{1.0, 0.0};
  double frequency_hz = 28e9;

  double k0() const { return 2.0 * kPi * frequency_hz / kC0; }
  double ui() const { return std::sin(deg(theta_inc_deg)) * std::cos(deg(phi_inc_deg)); }
  double vi() const { return std::sin(deg(theta_inc_deg)) * std::sin(deg(phi_inc_deg)); }
};

// Aperture current of one cell from the Love-equivalence construction,
// written out with this file's own vector algebra. zeta0 cancels.
inline Vec3 cell_current(cdouble gamma, const Wave& w) {
  const double th = deg(w.theta_inc_deg);
  const double ph = deg(w.phi_inc_deg);
  const Vec3 e_te = {cdouble(-std::sin(ph)), cdouble(std::cos(ph)), cdouble(0.0)};
  Vec3 e_hat = e_te;
  const Vec3 k_refl = {cdouble(-std::sin(th) * std::cos(ph)),
                       cdouble(-std::sin(th) * std::sin(ph)), cdouble(std::cos(th))};
  if (!w.te) {
    const Vec3 k_inc = {cdouble(-std::sin(th) * std::cos(ph)),
                        cdouble(-std::sin(th) * std::sin(ph)),
                        cdouble(-std::cos(th))};
    e_hat = cross(k_inc, e_te);
  }
  const Vec3 z_hat = {cdouble(0.0), cdouble(0.0), cdouble(1.0)};
  const Vec3 field = scale(e_hat, gamma * w.amplitude);
  constexpr double zeta0 = 376.730;
  const Vec3 j_e = scale(cross(z_hat, cross(k_refl, field)), cdouble(1.0 / zeta0));
  const Vec3 j_m = scale(cross(z_hat, field), cdouble(-1.0));
  return cross(z_hat, add(scale(cross(z_hat, j_e), cdouble(zeta0)), j_m));
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

// 2-D quadrature of exp(j k0 [(u+ui)x + (v+vi)y]) over one cell rectangle.
inline cdouble cell_integral_quadrature(double u, double v, const Wave& w,
                                        double cx, double cy, double dx,
                                        double dy, int points = 64) {
  static thread_local int cached_n = -1;
  static thread_local GaussLegendre gl(2);
  if (cached_n != points) {
    gl = GaussLegendre(points);
    cached_n = points;
  }
  const double k0 = w.k0();
  const double su = u + w.ui();
  const double sv = v + w.vi();
  cdouble acc(0.0, 0.0);
  for (int a = 0; a < points; ++a) {
    const double xx = cx + 0.5 * dx * gl.x[a];
    cdouble row(0.0, 0.0);
    for (int b = 0; b < points; ++b) {
      const double yy = cy + 0.5 * dy * gl.x[b];
      row += gl.w[b] * std::exp(cdouble(0.0, k0 * (su * xx + sv * yy)));
    }
    acc += gl.w[a] * row;
  }
  return acc * (0.25 * dx * dy);
}

struct Geometry {
  int p = 0, q = 0;
  double dx = 0.0, dy = 0.0;

  double cell_x(int ip) const { return (ip - 0.5 * (p - 1)) * dx; }
  double cell_y(int iq) const { return (iq - 0.5 * (q - 1)) * dy; }
};

// Direct double sum with per-cell numerical quadrature: the reference for
// the library's closed-form far field. gamma is row-major, index p*q + q.
inline Vec3 far_field_direct(const std::vector<cdouble>& gamma, const Wave& w,
                             const Geometry& g, double u, double v,
                             int quad_points = 64) {
  Vec3 acc = {cdouble(0.0), cdouble(0.0), cdouble(0.0)};
  for (int ip = 0; ip < g.p; ++ip) {
    for (int iq = 0; iq < g.q; ++iq) {
      const cdouble gam = gamma[static_cast<size_t>(ip) * g.q + iq];
      const Vec3 j = cell_current(gam, w);
      const cdouble integral = cell_integral_quadrature(
          u, v, w, g.cell_x(ip), g.cell_y(iq), g.dx, g.dy, quad_points);
      acc = add(acc, scale(j, integral));
    }
  }
  return scale(acc, cdouble(0.0, w.k0() / (4.0 * kPi)));
}

// Upper bound on the achievable field at one direction: all cell
// contributions summed in magnitude (perfect phase alignment), including
// the per-cell taper.
inline double coherent_sum_bound(const std::vector<cdouble>& gamma, const Wave& w,
                                 const Geometry& g, double u, double v) {
  const Vec3 j_unit = cell_current(cdouble(1.0, 0.0), w);
  const double jn = norm(j_unit);
  double acc = 0.0;
  for (int ip = 0; ip < g.p; ++ip) {
    for (int iq = 0; iq < g.q; ++iq) {
      const cdouble gam = gamma[static_cast<size_t>(ip) * g.q + iq];
      const cdouble integral =
          cell_integral_quadrature(u, v, w, g.cell_x(ip), g.cell_y(iq), g.dx, g.dy, 16);
      acc += std::abs(gam) * std::abs(integral);
    }
  }
  return acc * jn * w.k0() / (4.0 * kPi);
}

} // namespace oracle
