#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mpems/errors.hpp"
#include "mpems/wavegeom.hpp"

namespace mpems {

// The two geometric degrees of freedom of one rectangular-patch unit cell:
// patch extent along x (d1) and along y (d2), meters.
struct AtomDescriptor {
  double d1 = 0.0;
  double d2 = 0.0;
};

struct AtomBounds {
  double lo = 0.0; // meters, shared by d1 and d2
  double hi = 0.0;

  bool contains(const AtomDescriptor& d) const {
    return d.d1 >= lo && d.d1 <= hi && d.d2 >= lo && d.d2 <= hi;
  }
  double mid() const { return 0.5 * (lo + hi); }
};

// Stacking info carried for provenance only; nothing downstream reads it.
struct SubstrateInfo {
  double thickness_m = 5.1e-4;
  double epsilon_r = 3.0;
  double loss_tangent = 1.0e-3;
  double copper_thickness_m = 35e-6;
};

struct CellSpec {
  double pitch_x_m = 0.0;
  double pitch_y_m = 0.0;
  double frequency_hz = 28e9;
  SubstrateInfo substrate{};

  double wavelength() const { return kSpeedOfLight / frequency_hz; }

  // Square lattice with pitch = fraction * lambda0 (default 0.4).
  static CellSpec at_frequency(double frequency_hz, double pitch_fraction = 0.4);
};

// Fabrication-margin box: [0.05, 0.95] * pitch.
AtomBounds default_bounds(const CellSpec& cell, double lo_fraction = 0.05,
                          double hi_fraction = 0.95);

// One characterized unit cell: descriptor, incidence angle, and the complex
// reflection coefficient per polarization (linear, not dB).
struct ReflectionSample {
  AtomDescriptor descriptor{};
  double theta_inc_deg = 0.0;
  cplx gamma_te{};
  cplx gamma_tm{};
};

// Closed-form resonant stand-in for the full-wave cell response.
// Phase follows a smooth saturating profile around a resonance center that
// detunes with incidence angle; magnitude dips to the floor at resonance.
// The dominant descriptor is d2 for TE and d1 for TM, so swapping (d1,d2)
// swaps the polarizations exactly.
struct SyntheticAtomParams {
  double resonance_center_m = 0.0;    // d_c0
  double resonance_width_m = 0.0;     // w
  double phase_half_span_deg = 162.5; // phi_max
  double mag_base = 0.0;              // g0, linear
  double mag_dip = 0.0;               // g1, linear
  double detuning = 0.05;             // kappa

  static SyntheticAtomParams defaults(const CellSpec& cell);
};

cplx synthetic_gamma(const AtomDescriptor& d, double theta_inc_deg,
                     Polarization pol, const SyntheticAtomParams& p,
                     const AtomBounds& bounds);

// Any source of per-descriptor reflection coefficients.
using GammaFn = std::function<cplx(const AtomDescriptor&, double theta_inc_deg,
                                   Polarization)>;

GammaFn synthetic_gamma_fn(const SyntheticAtomParams& p, const AtomBounds& bounds);

// CSV schema (header mandatory):
//   d1_m,d2_m,theta_inc_deg,re_gamma_te,im_gamma_te,re_gamma_tm,im_gamma_tm
// UTF-8, '.' decimal separator. When bounds is non-null descriptors must lie
// inside it; |gamma| <= 1 is always required.
std::vector<ReflectionSample> load_reflection_table(const std::string& path,
                                                    const AtomBounds* bounds = nullptr);

void write_reflection_table(const std::string& path,
                            const std::vector<ReflectionSample>& samples);

struct AtomSamplePoint {
  AtomDescriptor descriptor{};
  double theta_inc_deg = 0.0;
};

// Latin hypercube over (d1, d2), drawn independently for each incidence
// angle in theta_set; n points per angle. Deterministic given seed.
std::vector<AtomSamplePoint> lhs_sample(const AtomBounds& bounds,
                                        const std::vector<double>& theta_set,
                                        int n, uint64_t seed);

struct EnvelopeReport {
  double min_mag_db = 0.0;
  double max_mag_db = 0.0;
  double phase_coverage_te_deg = 0.0;
  double phase_coverage_tm_deg = 0.0;
};

// Magnitude extremes and phase coverage over a uniform grid_res x grid_res
// descriptor grid at one incidence angle.
EnvelopeReport envelope_report(const GammaFn& gamma, const AtomBounds& bounds,
                               int grid_res, double theta_inc_deg = 0.0);

} // namespace mpems
