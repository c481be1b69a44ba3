#pragma once

#include <string>
#include <vector>

#include "mpems/atoms.hpp"
#include "mpems/kernels.hpp"
#include "mpems/kriging.hpp"

namespace mpems {

// Digital twin of the cell reflection response: four independent real
// Kriging channels, {Re, Im} x {TE, TM}, over (d1, d2, theta_inc). All four
// share the same training inputs. Complex values are modeled as Re/Im
// rather than magnitude/phase so there is no wrap discontinuity to fit.
struct GammaTwin {
  AtomBounds bounds{};
  double theta_lo_deg = 0.0;
  double theta_hi_deg = 0.0;
  KrigingModel re_te, im_te, re_tm, im_tm;

  int sample_count() const { return re_te.sample_count(); }
};

GammaTwin train_twin(const std::vector<ReflectionSample>& samples,
                     const AtomBounds& bounds, const KrigingOptions& opts = {});

// Kriged prediction, clamped to |Gamma| <= 1 preserving phase. Out-of-box
// queries (descriptor or angle) throw; the twin never extrapolates.
cplx predict_gamma(const GammaTwin& twin, const AtomDescriptor& d,
                   double theta_inc_deg, Polarization pol);

// Dense compilation of the twin at one incidence angle, for the inner loop.
// Grid covers exactly [lo, hi]^2; node (i, j) holds Gamma(lo + i*step,
// lo + j*step) with step = (hi-lo)/(resolution-1).
struct GammaLUT {
  double theta_inc_deg = 0.0;
  int resolution = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> te_re, te_im, tm_re, tm_im;

  double step() const { return (hi - lo) / (resolution - 1); }
  kernels::LutPlane plane(Polarization pol) const {
    if (pol == Polarization::TE) return {te_re.data(), te_im.data(), resolution, lo, step()};
    return {tm_re.data(), tm_im.data(), resolution, lo, step()};
  }
  bool contains(const AtomDescriptor& d) const {
    return d.d1 >= lo && d.d1 <= hi && d.d2 >= lo && d.d2 <= hi;
  }
};

GammaLUT compile_lut(const GammaTwin& twin, double theta_inc_deg,
                     int resolution = 128);

// Same table, filled straight from a closed-form source (tests, oracles).
GammaLUT compile_lut_from_fn(const GammaFn& gamma, const AtomBounds& bounds,
                             double theta_inc_deg, int resolution = 128);

// Bilinear interpolation of Re and Im separately; out-of-bounds throws.
cplx lut_lookup(const GammaLUT& lut, const AtomDescriptor& d, Polarization pol);

struct CrossValidationReport {
  double rmse_re_te = 0.0, rmse_im_te = 0.0;
  double rmse_re_tm = 0.0, rmse_im_tm = 0.0;
  double phase_rmse_deg_te = 0.0, phase_rmse_deg_tm = 0.0;
  double mag_rmse_te = 0.0, mag_rmse_tm = 0.0;
  double phase_rmse_deg = 0.0; // both polarizations pooled
  double mag_rmse = 0.0;
};

// k-fold cross validation of the twin on `samples`; fold assignment is a
// seeded shuffle, deterministic per seed.
CrossValidationReport cross_validate(const std::vector<ReflectionSample>& samples,
                                     const AtomBounds& bounds, int folds,
                                     uint64_t seed, const KrigingOptions& opts = {});

// JSON persistence. Metadata round-trips bit-identically; floats survive to
// the shortest round-trip representation (exact for finite doubles).
void save_twin_json(const GammaTwin& twin, const std::string& path);
GammaTwin load_twin_json(const std::string& path);
void save_lut_json(const GammaLUT& lut, const std::string& path);
GammaLUT load_lut_json(const std::string& path);

} // namespace mpems
