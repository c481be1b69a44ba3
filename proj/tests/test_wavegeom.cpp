#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mpems/wavegeom.hpp"

using namespace mpems;

namespace {

PlaneWaveSpec wave(double theta_deg, double phi_deg = 0.0,
                   Polarization pol = Polarization::TE, double f0 = 28e9) {
  PlaneWaveSpec w;
  w.polarization = pol;
  w.incidence = {theta_deg, phi_deg};
  w.frequency_hz = f0;
  return w;
}

// Independent arithmetic: k0 = 2 pi f / c with c = 299792458 m/s.
const double kK0_28GHz = 2.0 * 3.14159265358979323846 * 28e9 / 299792458.0;

} // namespace

TEST_CASE("wave vector at normal incidence") {
  const Vec3C k = wave_vector(wave(0.0));
  CHECK(kK0_28GHz == doctest::Approx(586.8366061).epsilon(1e-9)); // not 586.6
  CHECK(k.x.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(k.y.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(k.z.real() == doctest::Approx(-kK0_28GHz).epsilon(1e-12));
}

TEST_CASE("wave vector at grazing and oblique incidence") {
  const Vec3C g = wave_vector(wave(90.0));
  CHECK(g.x.real() == doctest::Approx(-kK0_28GHz).epsilon(1e-12));
  CHECK(std::abs(g.z.real()) < 1e-9);

  const Vec3C k = wave_vector(wave(30.0));
  CHECK(k.x.real() == doctest::Approx(-kK0_28GHz * 0.5).epsilon(1e-12));
  CHECK(k.x.real() == doctest::Approx(-293.4183031).epsilon(1e-9));
  CHECK(k.y.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(k.z.real() == doctest::Approx(-508.2154088).epsilon(1e-9));
}

TEST_CASE("polarization unit vectors at reference angles") {
  const Vec3C te30 = polarization_unit_vector(wave(30.0));
  CHECK(te30.x.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(te30.y.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(te30.z.real() == doctest::Approx(0.0).epsilon(1e-14));

  const Vec3C te0 = polarization_unit_vector(wave(0.0));
  CHECK(te0.y.real() == doctest::Approx(1.0).epsilon(1e-14));

  // k_hat x e_TE = (-z) x y = +x at normal incidence.
  const Vec3C tm0 = polarization_unit_vector(wave(0.0, 0.0, Polarization::TM));
  CHECK(tm0.x.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(tm0.y) < 1e-14);
  CHECK(std::abs(tm0.z) < 1e-14);
}

TEST_CASE("basis properties over the angle range") {
  const double k0 = kK0_28GHz;
  for (double th = -89.0; th <= 89.0; th += 7.3) {
    for (double ph : {0.0, 30.0, 117.0, 251.0}) {
      const auto w_te = wave(th, ph, Polarization::TE);
      const auto w_tm = wave(th, ph, Polarization::TM);
      const Vec3C e_te = polarization_unit_vector(w_te);
      const Vec3C e_tm = polarization_unit_vector(w_tm);
      const Vec3C k = wave_vector(w_te);

      CHECK(std::abs(e_te.norm() - 1.0) < 1e-12);
      CHECK(std::abs(e_tm.norm() - 1.0) < 1e-12);
      CHECK(std::abs(dot(e_te, k)) < 1e-10 * k0);
      CHECK(std::abs(dot(e_tm, k)) < 1e-10 * k0);
      CHECK(std::abs(dot(e_te, e_tm)) < 1e-12);
      CHECK(std::abs(k.norm() - k0) < 1e-9 * k0);
    }
  }
}

TEST_CASE("direction cosines") {
  const UV a = to_direction_cosines({30.0, 0.0});
  CHECK(a.u == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.v == doctest::Approx(0.0).epsilon(1e-12));

  const UV b = to_direction_cosines({-40.0, 0.0});
  CHECK(b.u == doctest::Approx(-0.6427876096865393).epsilon(1e-12));
  CHECK(std::abs(b.u - (-0.64)) < 5e-3);

  for (double ph : {0.0, 45.0, 190.0}) {
    const UV c = to_direction_cosines({0.0, ph});
    CHECK(std::abs(c.u) < 1e-15);
    CHECK(std::abs(c.v) < 1e-15);
  }
}

TEST_CASE("direction cosines odd in theta at phi=0") {
  for (double th = 0.0; th <= 90.0; th += 4.1) {
    const UV plus = to_direction_cosines({th, 0.0});
    const UV minus = to_direction_cosines({-th, 0.0});
    CHECK(plus.u == doctest::Approx(-minus.u).epsilon(1e-14));
    CHECK(plus.u * plus.u + plus.v * plus.v <= 1.0 + 1e-12);
  }
}

TEST_CASE("specular direction") {
  const UV n = specular_direction({0.0, 0.0});
  CHECK(n.u == 0.0);
  CHECK(n.v == 0.0);
  CHECK(specular_direction({30.0, 0.0}).u == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(specular_direction({-30.0, 0.0}).u == doctest::Approx(0.5).epsilon(1e-12));
}
