#include "mpems/objective.hpp"

#include <cmath>
#include <limits>

#include "mpems/kernels.hpp"

namespace mpems {

namespace {

SteeringTable::Entry build_entry(const PolTarget& target, const EmsLayout& geom) {
  SteeringTable::Entry e;
  if (target.weight <= 0.0) return e;
  e.active = true;
  const UV uv = to_direction_cosines(target.reflection);
  if (uv.u * uv.u + uv.v * uv.v > 1.0 + 1e-12)
    throw ValidationError("target direction outside the visible range");
  const int cells = geom.cells();
  e.t_re.resize(cells);
  e.t_im.resize(cells);
  for (int p = 0; p < geom.p_count; ++p) {
    for (int q = 0; q < geom.q_count; ++q) {
      const cplx t = cell_radiation_integral(uv, target.illumination,
                                             geom.cell_x(p), geom.cell_y(q),
                                             geom.cell.pitch_x_m,
                                             geom.cell.pitch_y_m);
      const int idx = p * geom.q_count + q;
      e.t_re[idx] = t.real();
      e.t_im[idx] = t.imag();
    }
  }
  const Vec3C j_unit = cell_current(cplx(1.0, 0.0), target.illumination);
  const double k_scale = target.illumination.wavenumber() / (4.0 * kPi);
  const double jn = j_unit.norm();
  e.field_scale2 = k_scale * k_scale * jn * jn;
  return e;
}

} // namespace

SteeringTable precompute_steering(const DesignTargets& targets,
                                  const EmsLayout& geometry) {
  if (targets.te.weight <= 0.0 && targets.tm.weight <= 0.0)
    throw ValidationError("at least one polarization must carry weight > 0");
  if (targets.te.weight < 0.0 || targets.tm.weight < 0.0)
    throw ValidationError("polarization weights must be >= 0");
  SteeringTable table;
  table.te = build_entry(targets.te, geometry);
  table.tm = build_entry(targets.tm, geometry);
  return table;
}

double combine_cost(double weight_te, double power_te, double weight_tm,
                    double power_tm) {
  double acc = 0.0;
  if (weight_te > 0.0) {
    if (!(power_te > 0.0)) return std::numeric_limits<double>::infinity();
    acc += weight_te / power_te;
  }
  if (weight_tm > 0.0) {
    if (!(power_tm > 0.0)) return std::numeric_limits<double>::infinity();
    acc += weight_tm / power_tm;
  }
  return acc;
}

double target_power(std::span<const double> descriptor_vec, Polarization pol,
                    const GammaLUT& lut, const SteeringTable& steering) {
  const auto& entry = steering.of(pol);
  if (!entry.active) return 0.0;
  const size_t cells = entry.t_re.size();
  const cplx s = kernels::active().steered_sum(lut.plane(pol),
                                               descriptor_vec.data(), cells,
                                               entry.t_re.data(),
                                               entry.t_im.data());
  return entry.field_scale2 * std::norm(s);
}

double cost(std::span<const double> descriptor_vec, const DesignTargets& targets,
            const GammaLUT& lut_te, const GammaLUT& lut_tm,
            const SteeringTable& steering) {
  const double p_te =
      steering.te.active
          ? target_power(descriptor_vec, Polarization::TE, lut_te, steering)
          : 0.0;
  const double p_tm =
      steering.tm.active
          ? target_power(descriptor_vec, Polarization::TM, lut_tm, steering)
          : 0.0;
  return combine_cost(targets.te.weight, p_te, targets.tm.weight, p_tm);
}

} // namespace mpems
