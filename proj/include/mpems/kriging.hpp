#pragma once

#include <vector>

#include "mpems/errors.hpp"

namespace mpems {

struct KrigingOptions {
  double nugget = 1e-10;
  int likelihood_sweeps = 2; // coordinate-search passes over the dimensions
  double log10_theta_min = -2.0;
  double log10_theta_max = 3.0;
  int theta_grid = 11; // log-spaced candidates per dimension
};

// Ordinary-Kriging interpolator for one real scalar channel with a Gaussian
// correlation R(x,x') = exp(-sum_l theta_l (x_l - x'_l)^2).
//
// Inputs are normalized to the unit cube by per-dimension affine maps fixed
// at construction; a dimension with zero extent collapses to coordinate 0.
// Hyperparameters come from maximizing the concentrated log-likelihood over
// a log-spaced grid, swept coordinate-wise. Queries outside the training box
// are refused: extrapolation error is unbounded and callers are expected to
// keep their search box inside the trained one.
class KrigingModel {
 public:
  static KrigingModel train(const std::vector<double>& inputs, int dim,
                            const std::vector<double>& outputs,
                            const std::vector<double>& box_lo,
                            const std::vector<double>& box_hi,
                            const KrigingOptions& opts = {});

  double predict(const double* x) const; // x: raw coordinates, length dim()

  int dim() const { return dim_; }
  int sample_count() const { return n_; }

  // Stored state, exposed for persistence. refit() rebuilds the solve
  // products (mean, weights) from the rest; loaders call it after filling in
  // the training arrays.
  std::vector<double> box_lo_, box_hi_;
  std::vector<double> x_norm_; // n x dim, row-major, unit cube
  std::vector<double> y_;
  std::vector<double> theta_;
  double nugget_ = 1e-10;
  double mean_ = 0.0;
  std::vector<double> weights_; // R^{-1} (y - mean 1)
  int dim_ = 0;
  int n_ = 0;

  void refit();

 private:
  std::vector<double> normalize(const double* x) const;
};

} // namespace mpems
