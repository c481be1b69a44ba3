#include "mpems/kriging.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpems {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Correlation matrix with nugget on the diagonal, from precomputed
// per-dimension squared-difference tables.
Matrix correlation(const std::vector<Matrix>& sqdiff, const std::vector<double>& theta,
                   double nugget) {
  const auto n = sqdiff.empty() ? 0 : sqdiff[0].rows();
  Matrix expo = Matrix::Zero(n, n);
  for (size_t l = 0; l < sqdiff.size(); ++l) expo -= theta[l] * sqdiff[l];
  Matrix r = expo.array().exp().matrix();
  r.diagonal().array() += nugget;
  return r;
}

struct Fit {
  double mean = 0.0;
  Vector weights;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

Fit fit_for(const Matrix& r, const Vector& y) {
  Fit f;
  Eigen::LLT<Matrix> llt(r);
  if (llt.info() != Eigen::Success) return f;
  const auto n = y.size();
  const Vector ones = Vector::Ones(n);
  const Vector ri_y = llt.solve(y);
  const Vector ri_1 = llt.solve(ones);
  const double denom = ones.dot(ri_1);
  if (!(denom > 0.0)) return f;
  f.mean = ones.dot(ri_y) / denom;
  const Vector resid = y - f.mean * ones;
  f.weights = llt.solve(resid);
  const double sigma2 = std::max(resid.dot(f.weights) / n, 0.0);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  // Concentrated log-likelihood up to constants. sigma2 -> 0 (exact data,
  // e.g. constant outputs) maxes out; the floor keeps the comparison finite.
  f.log_likelihood = -static_cast<double>(n) * std::log(std::max(sigma2, 1e-280)) - log_det;
  f.ok = true;
  return f;
}

} // namespace

std::vector<double> KrigingModel::normalize(const double* x) const {
  std::vector<double> u(dim_);
  for (int l = 0; l < dim_; ++l) {
    const double span = box_hi_[l] - box_lo_[l];
    if (span > 0.0) {
      u[l] = (x[l] - box_lo_[l]) / span;
      if (u[l] < -1e-9 || u[l] > 1.0 + 1e-9)
        throw ValidationError("kriging query outside the training box");
    } else {
      if (std::abs(x[l] - box_lo_[l]) > 1e-9 * std::max(1.0, std::abs(box_lo_[l])))
        throw ValidationError("kriging query off the degenerate training coordinate");
      u[l] = 0.0;
    }
  }
  return u;
}

KrigingModel KrigingModel::train(const std::vector<double>& inputs, int dim,
                                 const std::vector<double>& outputs,
                                 const std::vector<double>& box_lo,
                                 const std::vector<double>& box_hi,
                                 const KrigingOptions& opts) {
  if (dim <= 0) throw ValidationError("kriging: dim must be positive");
  const int n = static_cast<int>(outputs.size());
  if (n < 8) throw ValidationError("kriging: need at least 8 training samples");
  if (inputs.size() != static_cast<size_t>(n) * dim)
    throw ValidationError("kriging: inputs/outputs size mismatch");
  if (box_lo.size() != static_cast<size_t>(dim) || box_hi.size() != static_cast<size_t>(dim))
    throw ValidationError("kriging: box size mismatch");
  for (double v : outputs)
    if (!std::isfinite(v)) throw ValidationError("kriging: non-finite training output");

  KrigingModel m;
  m.dim_ = dim;
  m.n_ = n;
  m.box_lo_ = box_lo;
  m.box_hi_ = box_hi;
  m.y_ = outputs;
  m.nugget_ = opts.nugget;
  m.x_norm_.resize(static_cast<size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    const auto u = m.normalize(&inputs[static_cast<size_t>(i) * dim]);
    std::copy(u.begin(), u.end(), m.x_norm_.begin() + static_cast<size_t>(i) * dim);
  }

  // Pairwise-distinct inputs after normalization, else R is singular.
  {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::lexicographical_compare(
          m.x_norm_.begin() + static_cast<size_t>(a) * dim,
          m.x_norm_.begin() + static_cast<size_t>(a + 1) * dim,
          m.x_norm_.begin() + static_cast<size_t>(b) * dim,
          m.x_norm_.begin() + static_cast<size_t>(b + 1) * dim);
    });
    for (int i = 0; i + 1 < n; ++i) {
      const double* a = &m.x_norm_[static_cast<size_t>(order[i]) * dim];
      const double* b = &m.x_norm_[static_cast<size_t>(order[i + 1]) * dim];
      if (std::equal(a, a + dim, b)) throw ValidationError("kriging: duplicate training inputs");
    }
  }

  std::vector<Matrix> sqdiff(dim);
  std::vector<bool> degenerate(dim);
  for (int l = 0; l < dim; ++l) {
    sqdiff[l] = Matrix(n, n);
    bool all_zero = true;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = m.x_norm_[static_cast<size_t>(i) * dim + l] -
                         m.x_norm_[static_cast<size_t>(j) * dim + l];
        sqdiff[l](i, j) = d * d;
        all_zero = all_zero && d == 0.0;
      }
    }
    degenerate[l] = all_zero;
  }

  std::vector<double> grid(opts.theta_grid);
  for (int k = 0; k < opts.theta_grid; ++k) {
    const double t = opts.theta_grid == 1
                         ? opts.log10_theta_min
                         : opts.log10_theta_min + (opts.log10_theta_max - opts.log10_theta_min) *
                                                      k / (opts.theta_grid - 1);
    grid[k] = std::pow(10.0, t);
  }

  Eigen::Map<const Vector> y(m.y_.data(), n);
  m.theta_.assign(dim, 1.0);
  double best_ll = fit_for(correlation(sqdiff, m.theta_, m.nugget_), y).log_likelihood;

  for (int sweep = 0; sweep < opts.likelihood_sweeps; ++sweep) {
    for (int l = 0; l < dim; ++l) {
      if (degenerate[l]) continue;
      double best_theta = m.theta_[l];
      for (double cand : grid) {
        auto trial = m.theta_;
        trial[l] = cand;
        const Fit f = fit_for(correlation(sqdiff, trial, m.nugget_), y);
        if (f.ok && f.log_likelihood > best_ll) {
          best_ll = f.log_likelihood;
          best_theta = cand;
        }
      }
      m.theta_[l] = best_theta;
    }
  }

  m.refit();
  return m;
}

void KrigingModel::refit() {
  const int n = n_;
  const int dim = dim_;
  std::vector<Matrix> sqdiff(dim);
  for (int l = 0; l < dim; ++l) {
    sqdiff[l] = Matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double d = x_norm_[static_cast<size_t>(i) * dim + l] -
                         x_norm_[static_cast<size_t>(j) * dim + l];
        sqdiff[l](i, j) = d * d;
      }
  }
  Eigen::Map<const Vector> y(y_.data(), n);
  const Fit f = fit_for(correlation(sqdiff, theta_, nugget_), y);
  if (!f.ok) throw ValidationError("kriging: correlation matrix not positive definite");
  mean_ = f.mean;
  weights_.assign(f.weights.data(), f.weights.data() + n);
}

double KrigingModel::predict(const double* x) const {
  const auto u = normalize(x);
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    double expo = 0.0;
    const double* xi = &x_norm_[static_cast<size_t>(i) * dim_];
    for (int l = 0; l < dim_; ++l) {
      const double d = u[l] - xi[l];
      expo += theta_[l] * d * d;
    }
    acc += weights_[i] * std::exp(-expo);
  }
  return mean_ + acc;
}

} // namespace mpems
