#pragma once

#include <cmath>
#include <complex>

#include "mpems/constants.hpp"

namespace mpems {

using cplx = std::complex<double>;

enum class Polarization { TE, TM };

const char* name(Polarization pol);

// Angles are kept in degrees at every interface; conversion to radians
// happens once, inside the trig helpers below. Signed theta with phi = 0
// encodes the phi = 180 deg half-plane.
struct Direction {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

struct UV {
  double u = 0.0;
  double v = 0.0;
};

struct Vec3C {
  cplx x{}, y{}, z{};

  Vec3C operator+(const Vec3C& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3C operator-(const Vec3C& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3C operator*(const cplx& s) const { return {x * s, y * s, z * s}; }

  double norm() const {
    return std::sqrt(std::norm(x) + std::norm(y) + std::norm(z));
  }
};

inline Vec3C cross(const Vec3C& a, const Vec3C& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Unconjugated bilinear product.
inline cplx dot(const Vec3C& a, const Vec3C& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

struct PlaneWaveSpec {
  Polarization polarization = Polarization::TE;
  Direction incidence{};
  cplx amplitude{1.0, 0.0}; // V/m
  double frequency_hz = 28e9;

  double wavenumber() const { return 2.0 * kPi * frequency_hz / kSpeedOfLight; }
  double wavelength() const { return kSpeedOfLight / frequency_hz; }
};

// k_inc = -k0 [sin(th)cos(ph), sin(th)sin(ph), cos(th)]; real-valued, rad/m.
Vec3C wave_vector(const PlaneWaveSpec& spec);

// Mode unit vector. TE follows the theta -> 0 limit of (k_hat x z_hat)
// normalized, taken from the theta > 0 side at fixed phi, so the basis is
// continuous through normal incidence (e_TE = y_hat, e_TM = x_hat at phi=0).
// TM is k_hat_inc x e_TE.
Vec3C polarization_unit_vector(const PlaneWaveSpec& spec);

// u = sin(th)cos(ph), v = sin(th)sin(ph).
UV to_direction_cosines(const Direction& d);

// Mirror direction of an incident wave: (u,v) -> (-u,-v).
UV specular_direction(const Direction& incidence);

} // namespace mpems
