#include "mpems/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mpems/rng.hpp"

namespace mpems {

using nlohmann::json;

namespace {

struct TrainingArrays {
  std::vector<double> inputs; // n x 3: d1, d2, theta
  std::vector<double> re_te, im_te, re_tm, im_tm;
  double theta_lo = 0.0, theta_hi = 0.0;
};

TrainingArrays collect(const std::vector<ReflectionSample>& samples) {
  TrainingArrays t;
  const size_t n = samples.size();
  t.inputs.reserve(3 * n);
  t.theta_lo = samples.front().theta_inc_deg;
  t.theta_hi = t.theta_lo;
  for (const auto& s : samples) {
    t.inputs.push_back(s.descriptor.d1);
    t.inputs.push_back(s.descriptor.d2);
    t.inputs.push_back(s.theta_inc_deg);
    t.re_te.push_back(s.gamma_te.real());
    t.im_te.push_back(s.gamma_te.imag());
    t.re_tm.push_back(s.gamma_tm.real());
    t.im_tm.push_back(s.gamma_tm.imag());
    t.theta_lo = std::min(t.theta_lo, s.theta_inc_deg);
    t.theta_hi = std::max(t.theta_hi, s.theta_inc_deg);
  }
  return t;
}

cplx clamp_passive(cplx g) {
  const double mag = std::abs(g);
  if (mag > 1.0) return g / mag;
  return g;
}

} // namespace

GammaTwin train_twin(const std::vector<ReflectionSample>& samples,
                     const AtomBounds& bounds, const KrigingOptions& opts) {
  if (samples.size() < 8) throw ValidationError("twin training needs at least 8 samples");
  for (const auto& s : samples) {
    if (!bounds.contains(s.descriptor))
      throw ValidationError("training sample outside descriptor bounds");
  }
  const TrainingArrays t = collect(samples);

  GammaTwin twin;
  twin.bounds = bounds;
  twin.theta_lo_deg = t.theta_lo;
  twin.theta_hi_deg = t.theta_hi;
  const std::vector<double> lo = {bounds.lo, bounds.lo, t.theta_lo};
  const std::vector<double> hi = {bounds.hi, bounds.hi, t.theta_hi};
  twin.re_te = KrigingModel::train(t.inputs, 3, t.re_te, lo, hi, opts);
  twin.im_te = KrigingModel::train(t.inputs, 3, t.im_te, lo, hi, opts);
  twin.re_tm = KrigingModel::train(t.inputs, 3, t.re_tm, lo, hi, opts);
  twin.im_tm = KrigingModel::train(t.inputs, 3, t.im_tm, lo, hi, opts);
  return twin;
}

cplx predict_gamma(const GammaTwin& twin, const AtomDescriptor& d,
                   double theta_inc_deg, Polarization pol) {
  if (!twin.bounds.contains(d))
    throw ValidationError("twin query outside descriptor bounds");
  const double x[3] = {d.d1, d.d2, theta_inc_deg};
  cplx g;
  if (pol == Polarization::TE) {
    g = cplx(twin.re_te.predict(x), twin.im_te.predict(x));
  } else {
    g = cplx(twin.re_tm.predict(x), twin.im_tm.predict(x));
  }
  return clamp_passive(g);
}

namespace {

GammaLUT make_lut_shell(const AtomBounds& bounds, double theta_inc_deg, int resolution) {
  if (resolution < 16) throw ValidationError("LUT resolution must be >= 16");
  GammaLUT lut;
  lut.theta_inc_deg = theta_inc_deg;
  lut.resolution = resolution;
  lut.lo = bounds.lo;
  lut.hi = bounds.hi;
  const size_t nodes = static_cast<size_t>(resolution) * resolution;
  lut.te_re.resize(nodes);
  lut.te_im.resize(nodes);
  lut.tm_re.resize(nodes);
  lut.tm_im.resize(nodes);
  return lut;
}

} // namespace

GammaLUT compile_lut(const GammaTwin& twin, double theta_inc_deg, int resolution) {
  GammaLUT lut = make_lut_shell(twin.bounds, theta_inc_deg, resolution);
  const double step = lut.step();
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const AtomDescriptor d{lut.lo + i * step, lut.lo + j * step};
      const cplx te = predict_gamma(twin, d, theta_inc_deg, Polarization::TE);
      const cplx tm = predict_gamma(twin, d, theta_inc_deg, Polarization::TM);
      const size_t k = static_cast<size_t>(i) * resolution + j;
      lut.te_re[k] = te.real();
      lut.te_im[k] = te.imag();
      lut.tm_re[k] = tm.real();
      lut.tm_im[k] = tm.imag();
    }
  }
  return lut;
}

GammaLUT compile_lut_from_fn(const GammaFn& gamma, const AtomBounds& bounds,
                             double theta_inc_deg, int resolution) {
  GammaLUT lut = make_lut_shell(bounds, theta_inc_deg, resolution);
  const double step = lut.step();
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const AtomDescriptor d{lut.lo + i * step, lut.lo + j * step};
      const cplx te = gamma(d, theta_inc_deg, Polarization::TE);
      const cplx tm = gamma(d, theta_inc_deg, Polarization::TM);
      const size_t k = static_cast<size_t>(i) * resolution + j;
      lut.te_re[k] = te.real();
      lut.te_im[k] = te.imag();
      lut.tm_re[k] = tm.real();
      lut.tm_im[k] = tm.imag();
    }
  }
  return lut;
}

cplx lut_lookup(const GammaLUT& lut, const AtomDescriptor& d, Polarization pol) {
  if (!lut.contains(d)) throw ValidationError("LUT query outside descriptor bounds");
  double re, im;
  const double d1 = d.d1, d2 = d.d2;
  kernels::lut_lookup_batch_scalar(lut.plane(pol), &d1, &d2, 1, &re, &im);
  return {re, im};
}

CrossValidationReport cross_validate(const std::vector<ReflectionSample>& samples,
                                     const AtomBounds& bounds, int folds,
                                     uint64_t seed, const KrigingOptions& opts) {
  if (folds < 2) throw ValidationError("cross_validate requires folds >= 2");
  const int n = static_cast<int>(samples.size());
  if (n < folds) throw ValidationError("fewer samples than folds");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(seed, 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = rng.next_below(static_cast<uint32_t>(i + 1));
    std::swap(order[i], order[j]);
  }

  double se_re_te = 0, se_im_te = 0, se_re_tm = 0, se_im_tm = 0;
  double se_ph_te = 0, se_ph_tm = 0, se_mag_te = 0, se_mag_tm = 0;
  int held_out = 0;

  for (int f = 0; f < folds; ++f) {
    std::vector<ReflectionSample> train_set;
    std::vector<ReflectionSample> test_set;
    for (int i = 0; i < n; ++i) {
      if (i % folds == f) {
        test_set.push_back(samples[order[i]]);
      } else {
        train_set.push_back(samples[order[i]]);
      }
    }
    const GammaTwin twin = train_twin(train_set, bounds, opts);
    for (const auto& s : test_set) {
      // Skip points whose angle falls outside this fold's training range.
      if (s.theta_inc_deg < twin.theta_lo_deg - 1e-12 ||
          s.theta_inc_deg > twin.theta_hi_deg + 1e-12)
        continue;
      const cplx pte = predict_gamma(twin, s.descriptor, s.theta_inc_deg, Polarization::TE);
      const cplx ptm = predict_gamma(twin, s.descriptor, s.theta_inc_deg, Polarization::TM);
      se_re_te += std::pow(pte.real() - s.gamma_te.real(), 2);
      se_im_te += std::pow(pte.imag() - s.gamma_te.imag(), 2);
      se_re_tm += std::pow(ptm.real() - s.gamma_tm.real(), 2);
      se_im_tm += std::pow(ptm.imag() - s.gamma_tm.imag(), 2);
      auto wrap_deg = [](double deg) {
        while (deg > 180.0) deg -= 360.0;
        while (deg <= -180.0) deg += 360.0;
        return deg;
      };
      se_ph_te += std::pow(wrap_deg(rad2deg(std::arg(pte) - std::arg(s.gamma_te))), 2);
      se_ph_tm += std::pow(wrap_deg(rad2deg(std::arg(ptm) - std::arg(s.gamma_tm))), 2);
      se_mag_te += std::pow(std::abs(pte) - std::abs(s.gamma_te), 2);
      se_mag_tm += std::pow(std::abs(ptm) - std::abs(s.gamma_tm), 2);
      ++held_out;
    }
  }

  CrossValidationReport r;
  if (held_out == 0) return r;
  const double inv = 1.0 / held_out;
  r.rmse_re_te = std::sqrt(se_re_te * inv);
  r.rmse_im_te = std::sqrt(se_im_te * inv);
  r.rmse_re_tm = std::sqrt(se_re_tm * inv);
  r.rmse_im_tm = std::sqrt(se_im_tm * inv);
  r.phase_rmse_deg_te = std::sqrt(se_ph_te * inv);
  r.phase_rmse_deg_tm = std::sqrt(se_ph_tm * inv);
  r.mag_rmse_te = std::sqrt(se_mag_te * inv);
  r.mag_rmse_tm = std::sqrt(se_mag_tm * inv);
  r.phase_rmse_deg = std::sqrt(0.5 * (se_ph_te + se_ph_tm) * inv);
  r.mag_rmse = std::sqrt(0.5 * (se_mag_te + se_mag_tm) * inv);
  return r;
}

namespace {

json kriging_to_json(const KrigingModel& m) {
  return json{{"dim", m.dim_},
              {"n", m.n_},
              {"box_lo", m.box_lo_},
              {"box_hi", m.box_hi_},
              {"x_norm", m.x_norm_},
              {"y", m.y_},
              {"theta", m.theta_},
              {"nugget", m.nugget_}};
}

KrigingModel kriging_from_json(const json& j) {
  KrigingModel m;
  m.dim_ = j.at("dim").get<int>();
  m.n_ = j.at("n").get<int>();
  m.box_lo_ = j.at("box_lo").get<std::vector<double>>();
  m.box_hi_ = j.at("box_hi").get<std::vector<double>>();
  m.x_norm_ = j.at("x_norm").get<std::vector<double>>();
  m.y_ = j.at("y").get<std::vector<double>>();
  m.theta_ = j.at("theta").get<std::vector<double>>();
  m.nugget_ = j.at("nugget").get<double>();
  m.refit();
  return m;
}

void dump_to_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write: " + path);
  out << j.dump(1) << "\n";
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

} // namespace

void save_twin_json(const GammaTwin& twin, const std::string& path) {
  json j{{"format", "mpems-twin"},
         {"bounds", {{"lo", twin.bounds.lo}, {"hi", twin.bounds.hi}}},
         {"theta_lo_deg", twin.theta_lo_deg},
         {"theta_hi_deg", twin.theta_hi_deg},
         {"re_te", kriging_to_json(twin.re_te)},
         {"im_te", kriging_to_json(twin.im_te)},
         {"re_tm", kriging_to_json(twin.re_tm)},
         {"im_tm", kriging_to_json(twin.im_tm)}};
  dump_to_file(j, path);
}

GammaTwin load_twin_json(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("format", "") != "mpems-twin")
    throw ValidationError(path + ": not a twin file");
  GammaTwin twin;
  twin.bounds.lo = j.at("bounds").at("lo").get<double>();
  twin.bounds.hi = j.at("bounds").at("hi").get<double>();
  twin.theta_lo_deg = j.at("theta_lo_deg").get<double>();
  twin.theta_hi_deg = j.at("theta_hi_deg").get<double>();
  twin.re_te = kriging_from_json(j.at("re_te"));
  twin.im_te = kriging_from_json(j.at("im_te"));
  twin.re_tm = kriging_from_json(j.at("re_tm"));
  twin.im_tm = kriging_from_json(j.at("im_tm"));
  return twin;
}

void save_lut_json(const GammaLUT& lut, const std::string& path) {
  json j{{"format", "mpems-lut"},
         {"theta_inc_deg", lut.theta_inc_deg},
         {"resolution", lut.resolution},
         {"lo", lut.lo},
         {"hi", lut.hi},
         {"te_re", lut.te_re},
         {"te_im", lut.te_im},
         {"tm_re", lut.tm_re},
         {"tm_im", lut.tm_im}};
  dump_to_file(j, path);
}

GammaLUT load_lut_json(const std::string& path) {
  const json j = parse_file(path);
  if (j.value("format", "") != "mpems-lut")
    throw ValidationError(path + ": not a LUT file");
  GammaLUT lut;
  lut.theta_inc_deg = j.at("theta_inc_deg").get<double>();
  lut.resolution = j.at("resolution").get<int>();
  lut.lo = j.at("lo").get<double>();
  lut.hi = j.at("hi").get<double>();
  lut.te_re = j.at("te_re").get<std::vector<double>>();
  lut.te_im = j.at("te_im").get<std::vector<double>>();
  lut.tm_re = j.at("tm_re").get<std::vector<double>>();
  lut.tm_im = j.at("tm_im").get<std::vector<double>>();
  const size_t nodes = static_cast<size_t>(lut.resolution) * lut.resolution;
  if (lut.te_re.size() != nodes || lut.te_im.size() != nodes ||
      lut.tm_re.size() != nodes || lut.tm_im.size() != nodes)
    throw ValidationError(path + ": LUT array size mismatch");
  return lut;
}

} // namespace mpems
