#include "mpems/wavegeom.hpp"

namespace mpems {

const char* name(Polarization pol) {
  return pol == Polarization::TE ? "te" : "tm";
}

Vec3C wave_vector(const PlaneWaveSpec& spec) {
  const double k0 = spec.wavenumber();
  const double th = deg2rad(spec.incidence.theta_deg);
  const double ph = deg2rad(spec.incidence.phi_deg);
  return {cplx(-k0 * std::sin(th) * std::cos(ph), 0.0),
          cplx(-k0 * std::sin(th) * std::sin(ph), 0.0),
          cplx(-k0 * std::cos(th), 0.0)};
}

Vec3C polarization_unit_vector(const PlaneWaveSpec& spec) {
  const double ph = deg2rad(spec.incidence.phi_deg);
  const Vec3C e_te{cplx(-std::sin(ph), 0.0), cplx(std::cos(ph), 0.0), cplx(0.0, 0.0)};
  if (spec.polarization == Polarization::TE) return e_te;
  const double k0 = spec.wavenumber();
  const Vec3C k = wave_vector(spec);
  const Vec3C k_hat{k.x / k0, k.y / k0, k.z / k0};
  return cross(k_hat, e_te);
}

UV to_direction_cosines(const Direction& d) {
  const double th = deg2rad(d.theta_deg);
  const double ph = deg2rad(d.phi_deg);
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
}

UV specular_direction(const Direction& incidence) {
  const UV inc = to_direction_cosines(incidence);
  return {-inc.u, -inc.v};
}

} // namespace mpems
