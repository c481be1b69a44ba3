#include "mpems/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "mpems/rng.hpp"

namespace mpems {

CellSpec CellSpec::at_frequency(double frequency_hz, double pitch_fraction) {
  if (frequency_hz <= 0.0) throw ValidationError("cell frequency must be > 0");
  if (pitch_fraction <= 0.0) throw ValidationError("pitch fraction must be > 0");
  CellSpec cell;
  cell.frequency_hz = frequency_hz;
  cell.pitch_x_m = pitch_fraction * cell.wavelength();
  cell.pitch_y_m = cell.pitch_x_m;
  return cell;
}

AtomBounds default_bounds(const CellSpec& cell, double lo_fraction, double hi_fraction) {
  if (!(0.0 < lo_fraction && lo_fraction < hi_fraction && hi_fraction < 1.0))
    throw ValidationError("descriptor bounds fractions must satisfy 0 < lo < hi < 1");
  return {lo_fraction * cell.pitch_x_m, hi_fraction * cell.pitch_x_m};
}

SyntheticAtomParams SyntheticAtomParams::defaults(const CellSpec& cell) {
  SyntheticAtomParams p;
  p.resonance_center_m = 0.5 * cell.pitch_x_m;
  p.resonance_width_m = 0.15 * cell.pitch_x_m;
  p.phase_half_span_deg = 162.5;
  p.mag_base = std::pow(10.0, -0.1 / 20.0); // -0.1 dB away from resonance
  // Dip depth fixed so the floor is exactly -0.5 dB.
  p.mag_dip = p.mag_base - std::pow(10.0, -0.5 / 20.0);
  p.detuning = 0.05;
  return p;
}

cplx synthetic_gamma(const AtomDescriptor& d, double theta_inc_deg,
                     Polarization pol, const SyntheticAtomParams& p,
                     const AtomBounds& bounds) {
  if (!bounds.contains(d)) {
    throw ValidationError("descriptor outside admissible bounds");
  }
  const double d_dom = (pol == Polarization::TE) ? d.d2 : d.d1;
  const double s = std::sin(deg2rad(theta_inc_deg));
  const double d_c = p.resonance_center_m * (1.0 + p.detuning * s * s);
  const double t = (d_c - d_dom) / p.resonance_width_m;
  const double phase_deg = p.phase_half_span_deg * std::tanh(t);
  const double magnitude = p.mag_base - p.mag_dip * std::exp(-t * t);
  return std::polar(magnitude, deg2rad(phase_deg));
}

GammaFn synthetic_gamma_fn(const SyntheticAtomParams& p, const AtomBounds& bounds) {
  return [p, bounds](const AtomDescriptor& d, double theta_inc_deg, Polarization pol) {
    return synthetic_gamma(d, theta_inc_deg, pol, p, bounds);
  };
}

namespace {

constexpr const char* kTableHeader =
    "d1_m,d2_m,theta_inc_deg,re_gamma_te,im_gamma_te,re_gamma_tm,im_gamma_tm";

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_number(const std::string& field, const std::string& path, int line_no) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ValidationError(path + ":" + std::to_string(line_no) +
                          ": cannot parse number '" + field + "'");
  }
  while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
  if (used != field.size())
    throw ValidationError(path + ":" + std::to_string(line_no) +
                          ": trailing characters in number '" + field + "'");
  return v;
}

std::string trim_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

} // namespace

std::vector<ReflectionSample> load_reflection_table(const std::string& path,
                                                    const AtomBounds* bounds) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open reflection table: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": no samples (empty file)");
  if (trim_cr(line) != kTableHeader)
    throw ValidationError(path + ":1: header must be '" + std::string(kTableHeader) + "'");

  std::vector<ReflectionSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim_cr(line);
    if (row.empty()) continue;
    const auto fields = split_csv_row(row);
    if (fields.size() != 7)
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected 7 fields, got " + std::to_string(fields.size()));
    ReflectionSample s;
    s.descriptor.d1 = parse_number(fields[0], path, line_no);
    s.descriptor.d2 = parse_number(fields[1], path, line_no);
    s.theta_inc_deg = parse_number(fields[2], path, line_no);
    s.gamma_te = cplx(parse_number(fields[3], path, line_no),
                      parse_number(fields[4], path, line_no));
    s.gamma_tm = cplx(parse_number(fields[5], path, line_no),
                      parse_number(fields[6], path, line_no));
    if (!(s.descriptor.d1 > 0.0) || !(s.descriptor.d2 > 0.0))
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": descriptors must be positive");
    if (bounds && !bounds->contains(s.descriptor))
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": descriptor outside bounds");
    const double tol = 1.0 + 1e-9;
    if (std::abs(s.gamma_te) > tol || std::abs(s.gamma_tm) > tol)
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": |gamma| > 1 violates passivity");
    if (!std::isfinite(s.theta_inc_deg))
      throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite angle");
    samples.push_back(s);
  }
  if (samples.empty()) throw ValidationError(path + ": no samples");
  return samples;
}

void write_reflection_table(const std::string& path,
                            const std::vector<ReflectionSample>& samples) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write reflection table: " + path);
  out << kTableHeader << "\n";
  char buf[256];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.descriptor.d1, s.descriptor.d2, s.theta_inc_deg,
                  s.gamma_te.real(), s.gamma_te.imag(),
                  s.gamma_tm.real(), s.gamma_tm.imag());
    out << buf;
  }
}

std::vector<AtomSamplePoint> lhs_sample(const AtomBounds& bounds,
                                        const std::vector<double>& theta_set,
                                        int n, uint64_t seed) {
  if (n < 2) throw ValidationError("lhs_sample requires n >= 2");
  if (theta_set.empty()) throw ValidationError("lhs_sample requires at least one angle");
  if (!(bounds.lo < bounds.hi)) throw ValidationError("invalid descriptor bounds");

  std::vector<AtomSamplePoint> out;
  out.reserve(theta_set.size() * static_cast<size_t>(n));
  const double span = bounds.hi - bounds.lo;

  for (size_t ti = 0; ti < theta_set.size(); ++ti) {
    // One permutation per dimension, one jitter stream per (theta, dim).
    std::array<std::vector<int>, 2> strata;
    for (int dim = 0; dim < 2; ++dim) {
      auto& perm = strata[dim];
      perm.resize(n);
      std::iota(perm.begin(), perm.end(), 0);
      CounterRng shuffle_rng(seed, static_cast<uint32_t>(4 * ti + dim));
      for (int i = n - 1; i > 0; --i) {
        const auto j = shuffle_rng.next_below(static_cast<uint32_t>(i + 1));
        std::swap(perm[i], perm[j]);
      }
    }
    CounterRng jitter(seed, static_cast<uint32_t>(4 * ti + 2));
    for (int i = 0; i < n; ++i) {
      AtomSamplePoint p;
      p.theta_inc_deg = theta_set[ti];
      const double u1 = (strata[0][i] + jitter.next_double()) / n;
      const double u2 = (strata[1][i] + jitter.next_double()) / n;
      p.descriptor.d1 = bounds.lo + u1 * span;
      p.descriptor.d2 = bounds.lo + u2 * span;
      out.push_back(p);
    }
  }
  return out;
}

EnvelopeReport envelope_report(const GammaFn& gamma, const AtomBounds& bounds,
                               int grid_res, double theta_inc_deg) {
  if (grid_res < 8) throw ValidationError("envelope_report requires grid_res >= 8");
  EnvelopeReport r;
  double min_mag = std::numeric_limits<double>::infinity();
  double max_mag = 0.0;
  double min_ph[2] = {std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
  double max_ph[2] = {-std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  const double step = (bounds.hi - bounds.lo) / (grid_res - 1);
  for (int i = 0; i < grid_res; ++i) {
    for (int j = 0; j < grid_res; ++j) {
      const AtomDescriptor d{bounds.lo + i * step, bounds.lo + j * step};
      for (int p = 0; p < 2; ++p) {
        const auto pol = p == 0 ? Polarization::TE : Polarization::TM;
        const cplx g = gamma(d, theta_inc_deg, pol);
        const double mag = std::abs(g);
        min_mag = std::min(min_mag, mag);
        max_mag = std::max(max_mag, mag);
        if (mag > 0.0) {
          const double ph = rad2deg(std::arg(g));
          min_ph[p] = std::min(min_ph[p], ph);
          max_ph[p] = std::max(max_ph[p], ph);
        }
      }
    }
  }
  r.min_mag_db = 20.0 * std::log10(min_mag);
  r.max_mag_db = 20.0 * std::log10(max_mag);
  r.phase_coverage_te_deg = (max_ph[0] > min_ph[0]) ? max_ph[0] - min_ph[0] : 0.0;
  r.phase_coverage_tm_deg = (max_ph[1] > min_ph[1]) ? max_ph[1] - min_ph[1] : 0.0;
  return r;
}

} // namespace mpems
