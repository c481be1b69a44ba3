#pragma once

#include <string>
#include <vector>

#include "mpems/atoms.hpp"
#include "mpems/surrogate.hpp"
#include "mpems/wavegeom.hpp"

namespace mpems {

// P x Q grid of meta-atoms on the z = 0 plane. Cells are indexed row-major
// with p (x direction) outer: index = p * q_count + q. Cell centers are
// symmetric about the origin.
struct EmsLayout {
  int p_count = 0;
  int q_count = 0;
  CellSpec cell{};
  AtomBounds bounds{};
  std::vector<AtomDescriptor> descriptors;

  double cell_x(int p) const { return (p - 0.5 * (p_count - 1)) * cell.pitch_x_m; }
  double cell_y(int q) const { return (q - 0.5 * (q_count - 1)) * cell.pitch_y_m; }
  int cells() const { return p_count * q_count; }
  double aperture_side() const { return p_count * cell.pitch_x_m; }
};

EmsLayout make_layout(int p_count, int q_count, const CellSpec& cell,
                      const AtomBounds& bounds);

// Per-cell complex reflection coefficients for one polarization, evaluated
// at one incidence angle (piecewise-constant map).
struct GammaMap {
  int p_count = 0;
  int q_count = 0;
  double theta_inc_deg = 0.0;
  std::vector<cplx> gamma;
};

GammaMap gamma_map(const EmsLayout& layout, const GammaLUT& lut, Polarization pol);

// Equivalent aperture current of one cell: z_hat x [zeta0 z_hat x Je + Jm]
// with Je = (1/zeta0) z_hat x (k_hat x Gamma E e_psi) and
// Jm = -z_hat x (Gamma E e_psi). k_hat is the unit specular-reflected
// propagation direction; cross products associate to the right. The result
// is tangential by construction.
Vec3C cell_current(cplx gamma, const PlaneWaveSpec& wave);

// Closed-form radiation integral of one pixel basis function, incident
// phase folded in:
//   dx*dy * sinc(k0 (u+ui) dx/2) * sinc(k0 (v+vi) dy/2)
//        * exp(j k0 [(u+ui) cx + (v+vi) cy])
cplx cell_radiation_integral(const UV& uv, const PlaneWaveSpec& wave,
                             double center_x, double center_y, double dim_x,
                             double dim_y);

// (j k0 / 4 pi) sum_pq J_pq * I_pq(u, v). Throws outside the visible range.
Vec3C far_field_at(const GammaMap& gmap, const EmsLayout& layout,
                   const PlaneWaveSpec& wave, const UV& uv);

struct PatternSample {
  UV uv{};
  Vec3C e{};
  double magnitude = 0.0;
};

struct FarFieldPattern {
  Polarization polarization = Polarization::TE;
  PlaneWaveSpec illumination{};
  std::string label;
  std::vector<PatternSample> samples;
  // Sampling structure: nu x nv logical grid; grid_index[iu*nv + iv] is the
  // sample index or -1 for directions outside the unit disk. Cuts use nv=1.
  int nu = 0;
  int nv = 0;
  std::vector<int> grid_index;
};

// Radial cut: n uniform stations s in [-1, 1] along azimuth phi,
// (u, v) = s * (cos phi, sin phi).
FarFieldPattern pattern_cut(const GammaMap& gmap, const EmsLayout& layout,
                            const PlaneWaveSpec& wave, double phi_deg,
                            int n_samples);

// Uniform n_u x n_v grid over [-1, 1]^2, nodes outside the disk omitted.
FarFieldPattern pattern_grid(const GammaMap& gmap, const EmsLayout& layout,
                             const PlaneWaveSpec& wave, int n_u, int n_v);

struct PeakMetrics {
  UV uv_peak{};
  double magnitude_peak = 0.0;
  // Highest local maximum outside the -3 dB main-lobe region, dB relative
  // to the peak; -inf when no sidelobe exists.
  double sidelobe_level_db = 0.0;
};

PeakMetrics peak_metrics(const FarFieldPattern& pattern);

// CSV: u,v,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez,mag,mag_db_norm
void export_pattern_csv(const FarFieldPattern& pattern, const std::string& path);

void export_layout_json(const EmsLayout& layout, const std::string& path);
EmsLayout load_layout_json(const std::string& path);

} // namespace mpems
