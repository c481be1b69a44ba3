#include "mpems/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace mpems {

using nlohmann::json;

EmsLayout make_layout(int p_count, int q_count, const CellSpec& cell,
                      const AtomBounds& bounds) {
  if (p_count < 1 || q_count < 1) throw ValidationError("layout needs P, Q >= 1");
  if (!(bounds.lo < bounds.hi)) throw ValidationError("invalid descriptor bounds");
  EmsLayout l;
  l.p_count = p_count;
  l.q_count = q_count;
  l.cell = cell;
  l.bounds = bounds;
  l.descriptors.assign(static_cast<size_t>(p_count) * q_count,
                       AtomDescriptor{bounds.mid(), bounds.mid()});
  return l;
}

GammaMap gamma_map(const EmsLayout& layout, const GammaLUT& lut, Polarization pol) {
  GammaMap m;
  m.p_count = layout.p_count;
  m.q_count = layout.q_count;
  m.theta_inc_deg = lut.theta_inc_deg;
  m.gamma.resize(layout.descriptors.size());
  for (size_t i = 0; i < layout.descriptors.size(); ++i) {
    m.gamma[i] = lut_lookup(lut, layout.descriptors[i], pol);
  }
  return m;
}

Vec3C cell_current(cplx gamma, const PlaneWaveSpec& wave) {
  const Vec3C e_hat = polarization_unit_vector(wave);
  const cplx a = gamma * wave.amplitude;
  const Vec3C field{e_hat.x * a, e_hat.y * a, e_hat.z * a};

  // Unit specular-reflected propagation direction: incident direction with
  // the z component flipped upward.
  const double th = deg2rad(wave.incidence.theta_deg);
  const double ph = deg2rad(wave.incidence.phi_deg);
  const Vec3C k_hat{cplx(-std::sin(th) * std::cos(ph), 0.0),
                    cplx(-std::sin(th) * std::sin(ph), 0.0),
                    cplx(std::cos(th), 0.0)};
  const Vec3C z_hat{cplx(0.0), cplx(0.0), cplx(1.0)};

  const cplx inv_zeta(1.0 / kFreeSpaceImpedance, 0.0);
  const Vec3C j_e = cross(z_hat, cross(k_hat, field)) * inv_zeta;
  const Vec3C j_m = cross(z_hat, field) * cplx(-1.0, 0.0);
  return cross(z_hat, cross(z_hat, j_e) * cplx(kFreeSpaceImpedance, 0.0) + j_m);
}

namespace {

inline double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

} // namespace

cplx cell_radiation_integral(const UV& uv, const PlaneWaveSpec& wave,
                             double center_x, double center_y, double dim_x,
                             double dim_y) {
  const double k0 = wave.wavenumber();
  const UV inc = to_direction_cosines(wave.incidence);
  const double su = uv.u + inc.u;
  const double sv = uv.v + inc.v;
  const double taper =
      dim_x * dim_y * sinc(0.5 * k0 * su * dim_x) * sinc(0.5 * k0 * sv * dim_y);
  const double phase = k0 * (su * center_x + sv * center_y);
  return std::polar(taper, phase);
}

Vec3C far_field_at(const GammaMap& gmap, const EmsLayout& layout,
                   const PlaneWaveSpec& wave, const UV& uv) {
  if (uv.u * uv.u + uv.v * uv.v > 1.0 + 1e-12)
    throw ValidationError("direction outside the visible range");
  if (gmap.p_count != layout.p_count || gmap.q_count != layout.q_count)
    throw ValidationError("gamma map / layout shape mismatch");

  // J(Gamma) = Gamma * J(1), so the vector part is hoisted and the cell sum
  // runs over scalars.
  const Vec3C j_unit = cell_current(cplx(1.0, 0.0), wave);
  cplx acc(0.0, 0.0);
  for (int p = 0; p < layout.p_count; ++p) {
    const double x = layout.cell_x(p);
    for (int q = 0; q < layout.q_count; ++q) {
      const cplx g = gmap.gamma[static_cast<size_t>(p) * layout.q_count + q];
      acc += g * cell_radiation_integral(uv, wave, x, layout.cell_y(q),
                                         layout.cell.pitch_x_m,
                                         layout.cell.pitch_y_m);
    }
  }
  const cplx scale = cplx(0.0, wave.wavenumber() / (4.0 * kPi)) * acc;
  return j_unit * scale;
}

namespace {

PatternSample make_sample(const GammaMap& gmap, const EmsLayout& layout,
                          const PlaneWaveSpec& wave, const UV& uv) {
  PatternSample s;
  s.uv = uv;
  s.e = far_field_at(gmap, layout, wave, uv);
  s.magnitude = s.e.norm();
  return s;
}

} // namespace

FarFieldPattern pattern_cut(const GammaMap& gmap, const EmsLayout& layout,
                            const PlaneWaveSpec& wave, double phi_deg,
                            int n_samples) {
  if (n_samples < 2) throw ValidationError("pattern cut needs n >= 2");
  FarFieldPattern pat;
  pat.polarization = wave.polarization;
  pat.illumination = wave;
  pat.nu = n_samples;
  pat.nv = 1;
  pat.grid_index.resize(n_samples);
  const double cp = std::cos(deg2rad(phi_deg));
  const double sp = std::sin(deg2rad(phi_deg));
  pat.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double s = -1.0 + 2.0 * i / (n_samples - 1);
    pat.grid_index[i] = static_cast<int>(pat.samples.size());
    pat.samples.push_back(make_sample(gmap, layout, wave, UV{s * cp, s * sp}));
  }
  return pat;
}

FarFieldPattern pattern_grid(const GammaMap& gmap, const EmsLayout& layout,
                             const PlaneWaveSpec& wave, int n_u, int n_v) {
  if (n_u < 2 || n_v < 2) throw ValidationError("pattern grid needs n >= 2 per axis");
  FarFieldPattern pat;
  pat.polarization = wave.polarization;
  pat.illumination = wave;
  pat.nu = n_u;
  pat.nv = n_v;
  pat.grid_index.assign(static_cast<size_t>(n_u) * n_v, -1);
  for (int iu = 0; iu < n_u; ++iu) {
    const double u = -1.0 + 2.0 * iu / (n_u - 1);
    for (int iv = 0; iv < n_v; ++iv) {
      const double v = -1.0 + 2.0 * iv / (n_v - 1);
      if (u * u + v * v > 1.0) continue;
      pat.grid_index[static_cast<size_t>(iu) * n_v + iv] =
          static_cast<int>(pat.samples.size());
      pat.samples.push_back(make_sample(gmap, layout, wave, UV{u, v}));
    }
  }
  return pat;
}

PeakMetrics peak_metrics(const FarFieldPattern& pattern) {
  if (pattern.samples.empty()) throw ValidationError("empty pattern");
  const auto& samples = pattern.samples;
  size_t peak = 0;
  for (size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].magnitude > samples[peak].magnitude) peak = i;
  }
  PeakMetrics m;
  m.uv_peak = samples[peak].uv;
  m.magnitude_peak = samples[peak].magnitude;
  m.sidelobe_level_db = -std::numeric_limits<double>::infinity();
  if (m.magnitude_peak <= 0.0) return m;

  const int nu = pattern.nu, nv = pattern.nv;
  auto at = [&](int iu, int iv) -> int {
    if (iu < 0 || iu >= nu || iv < 0 || iv >= nv) return -1;
    return pattern.grid_index[static_cast<size_t>(iu) * nv + iv];
  };

  // Main lobe: flood fill from the peak over the >= -3 dB region.
  const double lobe_floor = m.magnitude_peak * std::pow(10.0, -3.0 / 20.0);
  std::vector<char> in_lobe(samples.size(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int iu = 0; iu < nu; ++iu)
    for (int iv = 0; iv < nv; ++iv)
      if (at(iu, iv) == static_cast<int>(peak)) stack.emplace_back(iu, iv);
  while (!stack.empty()) {
    const auto [iu, iv] = stack.back();
    stack.pop_back();
    const int idx = at(iu, iv);
    if (idx < 0 || in_lobe[idx] || samples[idx].magnitude < lobe_floor) continue;
    in_lobe[idx] = 1;
    stack.emplace_back(iu + 1, iv);
    stack.emplace_back(iu - 1, iv);
    stack.emplace_back(iu, iv + 1);
    stack.emplace_back(iu, iv - 1);
  }

  double best = 0.0;
  for (int iu = 0; iu < nu; ++iu) {
    for (int iv = 0; iv < nv; ++iv) {
      const int idx = at(iu, iv);
      if (idx < 0 || in_lobe[idx]) continue;
      const double mag = samples[idx].magnitude;
      bool local_max = true;
      const int nbr[4][2] = {{iu + 1, iv}, {iu - 1, iv}, {iu, iv + 1}, {iu, iv - 1}};
      for (const auto& nb : nbr) {
        const int nidx = at(nb[0], nb[1]);
        if (nidx >= 0 && samples[nidx].magnitude > mag) local_max = false;
      }
      if (local_max && mag > best) best = mag;
    }
  }
  if (best > 0.0) m.sidelobe_level_db = 20.0 * std::log10(best / m.magnitude_peak);
  return m;
}

void export_pattern_csv(const FarFieldPattern& pattern, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write pattern CSV: " + path);
  out << "u,v,re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez,mag,mag_db_norm\n";
  double peak = 0.0;
  for (const auto& s : pattern.samples) peak = std::max(peak, s.magnitude);
  char buf[512];
  for (const auto& s : pattern.samples) {
    const double db_norm =
        (peak > 0.0 && s.magnitude > 0.0)
            ? 20.0 * std::log10(s.magnitude / peak)
            : -std::numeric_limits<double>::infinity();
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.uv.u, s.uv.v, s.e.x.real(), s.e.x.imag(), s.e.y.real(),
                  s.e.y.imag(), s.e.z.real(), s.e.z.imag(), s.magnitude, db_norm);
    out << buf;
  }
}

void export_layout_json(const EmsLayout& layout, const std::string& path) {
  json desc = json::array();
  for (const auto& d : layout.descriptors) desc.push_back({d.d1, d.d2});
  const json j{{"format", "mpems-layout"},
               {"p", layout.p_count},
               {"q", layout.q_count},
               {"pitch_x_m", layout.cell.pitch_x_m},
               {"pitch_y_m", layout.cell.pitch_y_m},
               {"frequency_hz", layout.cell.frequency_hz},
               {"bounds", {{"lo", layout.bounds.lo}, {"hi", layout.bounds.hi}}},
               {"substrate",
                {{"thickness_m", layout.cell.substrate.thickness_m},
                 {"epsilon_r", layout.cell.substrate.epsilon_r},
                 {"loss_tangent", layout.cell.substrate.loss_tangent},
                 {"copper_thickness_m", layout.cell.substrate.copper_thickness_m}}},
               {"descriptors_m", desc}};
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write layout: " + path);
  out << j.dump(1) << "\n";
}

EmsLayout load_layout_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open layout: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (j.value("format", "") != "mpems-layout")
    throw ValidationError(path + ": not a layout file");
  EmsLayout l;
  l.p_count = j.at("p").get<int>();
  l.q_count = j.at("q").get<int>();
  l.cell.pitch_x_m = j.at("pitch_x_m").get<double>();
  l.cell.pitch_y_m = j.at("pitch_y_m").get<double>();
  l.cell.frequency_hz = j.at("frequency_hz").get<double>();
  l.bounds.lo = j.at("bounds").at("lo").get<double>();
  l.bounds.hi = j.at("bounds").at("hi").get<double>();
  if (j.contains("substrate")) {
    const auto& s = j.at("substrate");
    l.cell.substrate.thickness_m = s.at("thickness_m").get<double>();
    l.cell.substrate.epsilon_r = s.at("epsilon_r").get<double>();
    l.cell.substrate.loss_tangent = s.at("loss_tangent").get<double>();
    l.cell.substrate.copper_thickness_m = s.at("copper_thickness_m").get<double>();
  }
  const auto& desc = j.at("descriptors_m");
  if (static_cast<int>(desc.size()) != l.p_count * l.q_count)
    throw ValidationError(path + ": descriptor count does not match P*Q");
  for (const auto& d : desc) {
    AtomDescriptor a{d.at(0).get<double>(), d.at(1).get<double>()};
    if (!l.bounds.contains(a)) throw ValidationError(path + ": descriptor outside bounds");
    l.descriptors.push_back(a);
  }
  return l;
}

} // namespace mpems
