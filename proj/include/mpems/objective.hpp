#pragma once

#include <span>
#include <vector>

#include "mpems/fields.hpp"

namespace mpems {

struct PolTarget {
  PlaneWaveSpec illumination{};
  Direction reflection{};
  double weight = 1.0; // alpha
};

struct DesignTargets {
  PolTarget te{};
  PolTarget tm{};

  const PolTarget& of(Polarization pol) const {
    return pol == Polarization::TE ? te : tm;
  }
};

// Gamma-independent factors of the target-direction field, hoisted out of
// the optimization loop. With t_pq the per-cell radiation integrals at the
// target and field_scale2 = (k0/4pi)^2 ||J(Gamma=1)||^2,
//   |E_psi(target)|^2 = field_scale2 * |sum_pq Gamma_pq t_pq|^2
// so one cost evaluation is P*Q complex multiply-adds per polarization.
struct SteeringTable {
  struct Entry {
    bool active = false;
    std::vector<double> t_re, t_im; // per cell, layout order
    double field_scale2 = 0.0;
  };
  Entry te{}, tm{};

  const Entry& of(Polarization pol) const {
    return pol == Polarization::TE ? te : tm;
  }
};

SteeringTable precompute_steering(const DesignTargets& targets,
                                  const EmsLayout& geometry);

// sum_psi alpha_psi / |E_psi(target)|^2, +inf when a weighted target field
// vanishes (a valid ordering value, never a crash).
double combine_cost(double weight_te, double power_te, double weight_tm,
                    double power_tm);

// Cost of one candidate descriptor vector [d1,d2, d1,d2, ...] in layout
// order. lut_te / lut_tm are the tables at each polarization's incidence
// angle (the same object when the sources are co-located).
double cost(std::span<const double> descriptor_vec, const DesignTargets& targets,
            const GammaLUT& lut_te, const GammaLUT& lut_tm,
            const SteeringTable& steering);

// |E_psi(target)|^2 via the steering table, for one polarization.
double target_power(std::span<const double> descriptor_vec, Polarization pol,
                    const GammaLUT& lut, const SteeringTable& steering);

} // namespace mpems
