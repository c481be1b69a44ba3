#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "mpems/atoms.hpp"

using namespace mpems;

namespace {

struct Fixture {
  CellSpec cell = CellSpec::at_frequency(28e9);
  AtomBounds bounds = default_bounds(cell);
  SyntheticAtomParams params = SyntheticAtomParams::defaults(cell);
};

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

constexpr const char* kHeader =
    "d1_m,d2_m,theta_inc_deg,re_gamma_te,im_gamma_te,re_gamma_tm,im_gamma_tm\n";

} // namespace

TEST_CASE("cell factory pins pitch to 0.4 lambda") {
  const Fixture f;
  CHECK(f.cell.pitch_x_m == doctest::Approx(0.4 * 299792458.0 / 28e9).epsilon(1e-12));
  CHECK(f.cell.pitch_y_m == f.cell.pitch_x_m);
  // 20 cells -> aperture side ~ 8.57e-2 m
  CHECK(20.0 * f.cell.pitch_x_m == doctest::Approx(8.5655e-2).epsilon(1e-3));
  CHECK(f.cell.substrate.thickness_m == doctest::Approx(5.1e-4));
  CHECK(f.cell.substrate.epsilon_r == doctest::Approx(3.0));
}

TEST_CASE("synthetic gamma hits the resonance floor at the center") {
  const Fixture f;
  const double dc = f.params.resonance_center_m;
  const cplx g = synthetic_gamma({0.3 * f.cell.pitch_x_m, dc}, 0.0,
                                 Polarization::TE, f.params, f.bounds);
  CHECK(std::abs(std::arg(g)) < 1e-12);
  CHECK(std::abs(g) == doctest::Approx(0.9440608762859234).epsilon(1e-12));
  CHECK(20.0 * std::log10(std::abs(g)) == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("phase span at the bound extremes") {
  const Fixture f;
  const double lo = f.bounds.lo, hi = f.bounds.hi;
  const double mid = f.bounds.mid();
  const double ph_lo = std::arg(synthetic_gamma({mid, lo}, 0.0, Polarization::TE,
                                                f.params, f.bounds));
  const double ph_hi = std::arg(synthetic_gamma({mid, hi}, 0.0, Polarization::TE,
                                                f.params, f.bounds));
  const double span = rad2deg(ph_lo - ph_hi);
  CHECK(span == doctest::Approx(323.3927949).epsilon(1e-9));
  CHECK(span >= 320.0);
  CHECK(span <= 330.0);
}

TEST_CASE("polarization swap symmetry is exact") {
  const Fixture f;
  const double a = f.bounds.lo + 0.3 * (f.bounds.hi - f.bounds.lo);
  const double b = f.bounds.lo + 0.8 * (f.bounds.hi - f.bounds.lo);
  for (double theta : {0.0, 17.0, -40.0}) {
    const cplx te = synthetic_gamma({a, b}, theta, Polarization::TE, f.params, f.bounds);
    const cplx tm = synthetic_gamma({b, a}, theta, Polarization::TM, f.params, f.bounds);
    CHECK(te.real() == tm.real());
    CHECK(te.imag() == tm.imag());
  }
}

TEST_CASE("synthetic gamma rejects out-of-bounds descriptors") {
  const Fixture f;
  CHECK_THROWS_AS(synthetic_gamma({f.bounds.hi * 1.01, f.bounds.mid()}, 0.0,
                                  Polarization::TE, f.params, f.bounds),
                  ValidationError);
}

TEST_CASE("passivity and phase monotonicity") {
  const Fixture f;
  double prev_phase = 1e9;
  for (int i = 0; i < 200; ++i) {
    const double d2 = f.bounds.lo + (f.bounds.hi - f.bounds.lo) * i / 199.0;
    const cplx g = synthetic_gamma({f.bounds.mid(), d2}, 23.0, Polarization::TE,
                                   f.params, f.bounds);
    CHECK(std::abs(g) <= 1.0);
    const double ph = std::arg(g);
    CHECK(ph < prev_phase); // strictly decreasing in the dominant descriptor
    prev_phase = ph;
  }
}

TEST_CASE("incidence angle detunes the resonance") {
  const Fixture f;
  const AtomDescriptor d{f.bounds.mid(), f.params.resonance_center_m};
  const cplx at0 = synthetic_gamma(d, 0.0, Polarization::TE, f.params, f.bounds);
  const cplx at40 = synthetic_gamma(d, 40.0, Polarization::TE, f.params, f.bounds);
  CHECK(std::abs(at40 - at0) > 1e-3);
}

TEST_CASE("reflection table round-trip and row validation") {
  const Fixture f;
  const double m = f.bounds.mid();
  char row[256];
  std::snprintf(row, sizeof(row), "%.17g,%.17g,0,0.5,0.1,0.4,-0.2\n", m, m);

  SUBCASE("valid three-row file") {
    const auto path = write_temp("atoms_ok.csv",
                                 std::string(kHeader) + row + row + row);
    // Duplicate rows are fine here; the loader only validates values.
    const auto samples = load_reflection_table(path);
    CHECK(samples.size() == 3);
    CHECK(samples[0].gamma_te == cplx(0.5, 0.1));
    CHECK(samples[0].gamma_tm == cplx(0.4, -0.2));
  }

  SUBCASE("passivity violation names the line") {
    char bad[256];
    std::snprintf(bad, sizeof(bad), "%.17g,%.17g,0,1.3,0.0,0.4,0.0\n", m, m);
    const auto path = write_temp("atoms_bad.csv",
                                 std::string(kHeader) + row + bad);
    CHECK_THROWS_WITH_AS(load_reflection_table(path),
                         doctest::Contains(":3:"), ValidationError);
  }

  SUBCASE("empty file") {
    const auto path = write_temp("atoms_empty.csv", "");
    CHECK_THROWS_WITH_AS(load_reflection_table(path),
                         doctest::Contains("no samples"), ValidationError);
  }

  SUBCASE("header only") {
    const auto path = write_temp("atoms_header.csv", kHeader);
    CHECK_THROWS_WITH_AS(load_reflection_table(path),
                         doctest::Contains("no samples"), ValidationError);
  }

  SUBCASE("malformed number names the line") {
    const auto path = write_temp(
        "atoms_garbled.csv", std::string(kHeader) + "0.002,xyz,0,0.5,0,0.5,0\n");
    CHECK_THROWS_WITH_AS(load_reflection_table(path),
                         doctest::Contains(":2:"), ValidationError);
  }

  SUBCASE("writer output loads back") {
    std::vector<ReflectionSample> samples(3);
    for (auto& s : samples) {
      s.descriptor = {m, m * 1.01};
      s.gamma_te = cplx(0.3, 0.4);
      s.gamma_tm = cplx(-0.2, 0.1);
    }
    samples[1].descriptor.d1 *= 1.1;
    const auto path = (std::filesystem::temp_directory_path() / "atoms_rt.csv").string();
    write_reflection_table(path, samples);
    const auto loaded = load_reflection_table(path, &f.bounds);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[1].descriptor.d1 == samples[1].descriptor.d1);
    CHECK(loaded[2].gamma_tm == samples[2].gamma_tm);
  }
}

TEST_CASE("latin hypercube stratification") {
  const Fixture f;
  const int n = 4;
  const auto pts = lhs_sample(f.bounds, {0.0}, n, 42);
  REQUIRE(pts.size() == 4);
  const double span = f.bounds.hi - f.bounds.lo;
  std::set<int> strata_d1, strata_d2;
  for (const auto& p : pts) {
    strata_d1.insert(static_cast<int>((p.descriptor.d1 - f.bounds.lo) / span * n));
    strata_d2.insert(static_cast<int>((p.descriptor.d2 - f.bounds.lo) / span * n));
  }
  CHECK(strata_d1.size() == 4); // exactly one point per stratum
  CHECK(strata_d2.size() == 4);
}

TEST_CASE("latin hypercube determinism and containment") {
  const Fixture f;
  const auto a = lhs_sample(f.bounds, {0.0, -30.0}, 400, 7);
  const auto b = lhs_sample(f.bounds, {0.0, -30.0}, 400, 7);
  REQUIRE(a.size() == 800); // n points per incidence angle
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].descriptor.d1 == b[i].descriptor.d1);
    CHECK(a[i].descriptor.d2 == b[i].descriptor.d2);
    CHECK(f.bounds.contains(a[i].descriptor));
  }
  const auto c = lhs_sample(f.bounds, {0.0, -30.0}, 400, 8);
  bool any_differ = false;
  for (size_t i = 0; i < a.size(); ++i)
    any_differ = any_differ || a[i].descriptor.d1 != c[i].descriptor.d1;
  CHECK(any_differ);
}

TEST_CASE("envelope report on the synthetic defaults") {
  const Fixture f;
  const auto rep = envelope_report(synthetic_gamma_fn(f.params, f.bounds),
                                   f.bounds, 64, 0.0);
  CHECK(rep.phase_coverage_te_deg >= 320.0);
  CHECK(rep.phase_coverage_te_deg <= 330.0);
  CHECK(rep.phase_coverage_tm_deg == rep.phase_coverage_te_deg);
  CHECK(rep.min_mag_db >= -0.5 - 1e-9);
  CHECK(rep.max_mag_db <= -0.098);
}

TEST_CASE("envelope report on a constant source") {
  const Fixture f;
  const GammaFn constant = [](const AtomDescriptor&, double, Polarization) {
    return cplx(0.9, 0.0);
  };
  const auto rep = envelope_report(constant, f.bounds, 16, 0.0);
  CHECK(rep.phase_coverage_te_deg == 0.0);
  CHECK(rep.phase_coverage_tm_deg == 0.0);
  CHECK(rep.min_mag_db == doctest::Approx(rep.max_mag_db));
}
