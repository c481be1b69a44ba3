#include "mpems/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

namespace mpems {

using nlohmann::json;

CellSpec DesignConfig::make_cell() const {
  CellSpec cell = CellSpec::at_frequency(frequency_hz, pitch_fraction);
  cell.substrate = substrate;
  return cell;
}

AtomBounds DesignConfig::make_bounds() const {
  return default_bounds(make_cell(), bounds_lo_fraction, bounds_hi_fraction);
}

DesignConfig default_config() {
  DesignConfig c;
  c.targets.te.illumination.polarization = Polarization::TE;
  c.targets.te.illumination.frequency_hz = c.frequency_hz;
  c.targets.te.reflection = {30.0, 0.0};
  c.targets.tm.illumination.polarization = Polarization::TM;
  c.targets.tm.illumination.frequency_hz = c.frequency_hz;
  c.targets.tm.reflection = {-40.0, 0.0};
  return c;
}

namespace {

// Pulls known keys out of `j`, then rejects leftovers so config typos
// surface as errors instead of silently running defaults.
class StrictObject {
 public:
  StrictObject(const json& j, std::string scope) : scope_(std::move(scope)) {
    if (!j.is_object())
      throw ValidationError("config: '" + scope_ + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) remaining_[it.key()] = it.value();
  }

  template <typename T>
  T take(const std::string& key, T fallback) {
    auto it = remaining_.find(key);
    if (it == remaining_.end()) return fallback;
    json v = it->second;
    remaining_.erase(it);
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config: bad value for '" + qualify(key) + "'");
    }
  }

  bool has(const std::string& key) const { return remaining_.count(key) > 0; }

  json take_raw(const std::string& key) {
    auto it = remaining_.find(key);
    if (it == remaining_.end()) return json();
    json v = it->second;
    remaining_.erase(it);
    return v;
  }

  void finish() const {
    if (!remaining_.empty())
      throw ValidationError("config: unknown field '" +
                            qualify(remaining_.begin()->first) + "'");
  }

  std::string qualify(const std::string& key) const {
    return scope_.empty() ? key : scope_ + "." + key;
  }

 private:
  std::string scope_;
  std::map<std::string, json> remaining_;
};

PolTarget parse_target(const json& j, Polarization pol, double frequency_hz,
                       const std::string& scope) {
  StrictObject o(j, scope);
  PolTarget t;
  t.illumination.polarization = pol;
  t.illumination.frequency_hz = frequency_hz;
  t.weight = o.take<double>("weight", 1.0);
  if (t.weight < 0.0)
    throw ValidationError("config: '" + scope + ".weight' must be >= 0");
  const double amp_re = o.take<double>("amplitude_re", 1.0);
  const double amp_im = o.take<double>("amplitude_im", 0.0);
  t.illumination.amplitude = cplx(amp_re, amp_im);
  t.illumination.incidence.theta_deg = o.take<double>("theta_inc_deg", 0.0);
  t.illumination.incidence.phi_deg = o.take<double>("phi_inc_deg", 0.0);
  t.reflection.theta_deg = o.take<double>("theta_refl_deg",
                                          pol == Polarization::TE ? 30.0 : -40.0);
  t.reflection.phi_deg = o.take<double>("phi_refl_deg", 0.0);
  o.finish();
  if (std::abs(t.illumination.incidence.theta_deg) > 90.0)
    throw ValidationError("config: '" + scope + ".theta_inc_deg' must be in [-90, 90]");
  if (std::abs(t.reflection.theta_deg) > 90.0)
    throw ValidationError("config: '" + scope + ".theta_refl_deg' must be in [-90, 90]");
  return t;
}

} // namespace

DesignConfig parse_config(const json& j) {
  DesignConfig c = default_config();
  StrictObject root(j, "");

  if (root.has("layout")) {
    StrictObject layout(root.take_raw("layout"), "layout");
    c.p_count = layout.take<int>("p", c.p_count);
    c.q_count = layout.take<int>("q", c.q_count);
    layout.finish();
  }
  if (c.p_count < 1 || c.q_count < 1)
    throw ValidationError("config: 'layout.p' and 'layout.q' must be >= 1");

  c.frequency_hz = root.take<double>("frequency_hz", c.frequency_hz);
  if (!(c.frequency_hz > 0.0))
    throw ValidationError("config: 'frequency_hz' must be > 0");
  c.pitch_fraction = root.take<double>("pitch_fraction", c.pitch_fraction);
  if (!(c.pitch_fraction > 0.0))
    throw ValidationError("config: 'pitch_fraction' must be > 0");

  if (root.has("bounds_fraction")) {
    StrictObject b(root.take_raw("bounds_fraction"), "bounds_fraction");
    c.bounds_lo_fraction = b.take<double>("lo", c.bounds_lo_fraction);
    c.bounds_hi_fraction = b.take<double>("hi", c.bounds_hi_fraction);
    b.finish();
  }
  if (!(0.0 < c.bounds_lo_fraction && c.bounds_lo_fraction < c.bounds_hi_fraction &&
        c.bounds_hi_fraction < 1.0))
    throw ValidationError("config: 'bounds_fraction' must satisfy 0 < lo < hi < 1");

  if (root.has("substrate")) {
    StrictObject s(root.take_raw("substrate"), "substrate");
    c.substrate.thickness_m = s.take<double>("thickness_m", c.substrate.thickness_m);
    c.substrate.epsilon_r = s.take<double>("epsilon_r", c.substrate.epsilon_r);
    c.substrate.loss_tangent = s.take<double>("loss_tangent", c.substrate.loss_tangent);
    c.substrate.copper_thickness_m =
        s.take<double>("copper_thickness_m", c.substrate.copper_thickness_m);
    s.finish();
  }

  if (root.has("targets")) {
    StrictObject t(root.take_raw("targets"), "targets");
    if (t.has("te"))
      c.targets.te = parse_target(t.take_raw("te"), Polarization::TE,
                                  c.frequency_hz, "targets.te");
    if (t.has("tm"))
      c.targets.tm = parse_target(t.take_raw("tm"), Polarization::TM,
                                  c.frequency_hz, "targets.tm");
    t.finish();
  }
  c.targets.te.illumination.frequency_hz = c.frequency_hz;
  c.targets.tm.illumination.frequency_hz = c.frequency_hz;
  if (c.targets.te.weight <= 0.0 && c.targets.tm.weight <= 0.0)
    throw ValidationError("config: at least one of 'targets.*.weight' must be > 0");

  if (root.has("twin")) {
    StrictObject t(root.take_raw("twin"), "twin");
    c.twin.source = t.take<std::string>("source", c.twin.source);
    c.twin.table_path = t.take<std::string>("table_path", c.twin.table_path);
    c.twin.training_n = t.take<int>("training_n", c.twin.training_n);
    c.twin.seed = t.take<uint64_t>("seed", c.twin.seed);
    c.twin.lut_resolution = t.take<int>("lut_resolution", c.twin.lut_resolution);
    c.twin.cv_folds = t.take<int>("cv_folds", c.twin.cv_folds);
    c.twin.cv_seed = t.take<uint64_t>("cv_seed", c.twin.cv_seed);
    t.finish();
    if (c.twin.source != "synthetic" && c.twin.source != "table")
      throw ValidationError("config: 'twin.source' must be 'synthetic' or 'table'");
    if (c.twin.source == "table" && c.twin.table_path.empty())
      throw ValidationError("config: 'twin.table_path' required for table source");
    if (c.twin.training_n < 8)
      throw ValidationError("config: 'twin.training_n' must be >= 8");
    if (c.twin.lut_resolution < 16)
      throw ValidationError("config: 'twin.lut_resolution' must be >= 16");
  }

  if (root.has("pso")) {
    StrictObject p(root.take_raw("pso"), "pso");
    c.pso.swarm_size = p.take<int>("swarm_size", c.pso.swarm_size);
    c.pso.iterations = p.take<int>("iterations", c.pso.iterations);
    c.pso.inertia_start = p.take<double>("inertia_start", c.pso.inertia_start);
    c.pso.inertia_end = p.take<double>("inertia_end", c.pso.inertia_end);
    c.pso.cognitive = p.take<double>("cognitive", c.pso.cognitive);
    c.pso.social = p.take<double>("social", c.pso.social);
    c.pso.v_max_fraction = p.take<double>("v_max_fraction", c.pso.v_max_fraction);
    c.pso.seed = p.take<uint64_t>("seed", c.pso.seed);
    c.pso.stagnation_window = p.take<int>("stagnation_window", c.pso.stagnation_window);
    p.finish();
    if (c.pso.swarm_size < 2)
      throw ValidationError("config: 'pso.swarm_size' must be >= 2");
    if (c.pso.iterations < 1)
      throw ValidationError("config: 'pso.iterations' must be >= 1");
  }

  if (root.has("evaluation")) {
    StrictObject e(root.take_raw("evaluation"), "evaluation");
    c.evaluation.cut_samples = e.take<int>("cut_samples", c.evaluation.cut_samples);
    c.evaluation.grid_nu = e.take<int>("grid_nu", c.evaluation.grid_nu);
    c.evaluation.grid_nv = e.take<int>("grid_nv", c.evaluation.grid_nv);
    e.finish();
    if (c.evaluation.cut_samples < 2 || c.evaluation.grid_nu < 2 || c.evaluation.grid_nv < 2)
      throw ValidationError("config: 'evaluation' resolutions must be >= 2");
  }

  c.warm_start = root.take<bool>("warm_start", c.warm_start);
  root.finish();
  return c;
}

namespace {

json target_to_json(const PolTarget& t) {
  return json{{"weight", t.weight},
              {"amplitude_re", t.illumination.amplitude.real()},
              {"amplitude_im", t.illumination.amplitude.imag()},
              {"theta_inc_deg", t.illumination.incidence.theta_deg},
              {"phi_inc_deg", t.illumination.incidence.phi_deg},
              {"theta_refl_deg", t.reflection.theta_deg},
              {"phi_refl_deg", t.reflection.phi_deg}};
}

} // namespace

json config_to_json(const DesignConfig& c) {
  return json{
      {"layout", {{"p", c.p_count}, {"q", c.q_count}}},
      {"frequency_hz", c.frequency_hz},
      {"pitch_fraction", c.pitch_fraction},
      {"bounds_fraction", {{"lo", c.bounds_lo_fraction}, {"hi", c.bounds_hi_fraction}}},
      {"substrate",
       {{"thickness_m", c.substrate.thickness_m},
        {"epsilon_r", c.substrate.epsilon_r},
        {"loss_tangent", c.substrate.loss_tangent},
        {"copper_thickness_m", c.substrate.copper_thickness_m}}},
      {"targets", {{"te", target_to_json(c.targets.te)}, {"tm", target_to_json(c.targets.tm)}}},
      {"twin",
       {{"source", c.twin.source},
        {"table_path", c.twin.table_path},
        {"training_n", c.twin.training_n},
        {"seed", c.twin.seed},
        {"lut_resolution", c.twin.lut_resolution},
        {"cv_folds", c.twin.cv_folds},
        {"cv_seed", c.twin.cv_seed}}},
      {"pso",
       {{"swarm_size", c.pso.swarm_size},
        {"iterations", c.pso.iterations},
        {"inertia_start", c.pso.inertia_start},
        {"inertia_end", c.pso.inertia_end},
        {"cognitive", c.pso.cognitive},
        {"social", c.pso.social},
        {"v_max_fraction", c.pso.v_max_fraction},
        {"seed", c.pso.seed},
        {"stagnation_window", c.pso.stagnation_window}}},
      {"evaluation",
       {{"cut_samples", c.evaluation.cut_samples},
        {"grid_nu", c.evaluation.grid_nu},
        {"grid_nv", c.evaluation.grid_nv}}},
      {"warm_start", c.warm_start}};
}

DesignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

void collect_leaf_paths(const json& j, const std::string& prefix,
                        std::vector<std::string>& out) {
  if (!j.is_object()) {
    out.push_back(prefix);
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    collect_leaf_paths(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                       out);
  }
}

} // namespace

void apply_override(json& config_json, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ValidationError("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  const json reference = config_to_json(default_config());
  std::vector<std::string> valid;
  collect_leaf_paths(reference, "", valid);
  if (std::find(valid.begin(), valid.end(), path) == valid.end()) {
    std::string msg = "unknown override key '" + path + "'; valid keys:";
    for (const auto& k : valid) msg += "\n  " + k;
    throw ValidationError(msg);
  }

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value; // plain strings need no quoting
  }

  json* node = &config_json;
  size_t begin = 0;
  while (true) {
    const size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot - begin);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      break;
    }
    node = &(*node)[key];
    begin = dot + 1;
  }
}

namespace {

std::vector<double> active_thetas(const DesignConfig& config) {
  std::vector<double> thetas;
  if (config.targets.te.weight > 0.0)
    thetas.push_back(config.targets.te.illumination.incidence.theta_deg);
  if (config.targets.tm.weight > 0.0)
    thetas.push_back(config.targets.tm.illumination.incidence.theta_deg);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  return thetas;
}

} // namespace

std::vector<ReflectionSample> build_training_set(const DesignConfig& config) {
  const AtomBounds bounds = config.make_bounds();
  if (config.twin.source == "table") {
    auto samples = load_reflection_table(config.twin.table_path, &bounds);
    const auto thetas = active_thetas(config);
    double lo = samples.front().theta_inc_deg, hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, s.theta_inc_deg);
      hi = std::max(hi, s.theta_inc_deg);
    }
    for (double t : thetas) {
      if (t < lo - 1e-9 || t > hi + 1e-9)
        throw ValidationError("reflection table does not cover incidence angle " +
                              std::to_string(t) + " deg");
    }
    return samples;
  }

  const CellSpec cell = config.make_cell();
  const SyntheticAtomParams params = SyntheticAtomParams::defaults(cell);
  const auto points = lhs_sample(bounds, active_thetas(config),
                                 config.twin.training_n, config.twin.seed);
  std::vector<ReflectionSample> samples;
  samples.reserve(points.size());
  for (const auto& pt : points) {
    ReflectionSample s;
    s.descriptor = pt.descriptor;
    s.theta_inc_deg = pt.theta_inc_deg;
    s.gamma_te = synthetic_gamma(pt.descriptor, pt.theta_inc_deg,
                                 Polarization::TE, params, bounds);
    s.gamma_tm = synthetic_gamma(pt.descriptor, pt.theta_inc_deg,
                                 Polarization::TM, params, bounds);
    samples.push_back(s);
  }
  return samples;
}

PreparedTwin prepare_luts(const GammaTwin& twin, const DesignConfig& config) {
  PreparedTwin out;
  out.twin = twin;
  const double th_te = config.targets.te.illumination.incidence.theta_deg;
  const double th_tm = config.targets.tm.illumination.incidence.theta_deg;
  const bool te_active = config.targets.te.weight > 0.0;
  const bool tm_active = config.targets.tm.weight > 0.0;
  if (te_active) out.lut_te = compile_lut(out.twin, th_te, config.twin.lut_resolution);
  if (tm_active) {
    if (te_active && th_tm == th_te) {
      out.lut_tm = out.lut_te;
    } else {
      out.lut_tm = compile_lut(out.twin, th_tm, config.twin.lut_resolution);
    }
  }
  if (!te_active) out.lut_te = out.lut_tm;
  if (!tm_active) out.lut_tm = out.lut_te;
  return out;
}

PreparedTwin prepare_twin(const DesignConfig& config) {
  const auto samples = build_training_set(config);
  const GammaTwin twin = train_twin(samples, config.make_bounds());
  return prepare_luts(twin, config);
}

double conjugation_phase_deg(const Direction& target,
                             const PlaneWaveSpec& illumination, double cell_x,
                             double cell_y) {
  const UV refl = to_direction_cosines(target);
  const UV inc = to_direction_cosines(illumination.incidence);
  const double k0 = illumination.wavenumber();
  double phase =
      rad2deg(-k0 * ((refl.u + inc.u) * cell_x + (refl.v + inc.v) * cell_y));
  phase = std::fmod(phase, 360.0);
  if (phase > 180.0) phase -= 360.0;
  if (phase <= -180.0) phase += 360.0;
  return phase;
}

EmsLayout phase_conjugation_design(const Direction& target,
                                   const PlaneWaveSpec& illumination,
                                   const EmsLayout& geometry,
                                   const GammaLUT& lut, Polarization pol) {
  EmsLayout out = geometry;
  const double mid = geometry.bounds.mid();
  const double step = lut.step();

  // Achievable phase along the dominant axis, other descriptor mid-range.
  std::vector<double> node_value(lut.resolution);
  std::vector<double> node_phase_deg(lut.resolution);
  for (int k = 0; k < lut.resolution; ++k) {
    node_value[k] = lut.lo + k * step;
    const AtomDescriptor d = pol == Polarization::TE
                                 ? AtomDescriptor{mid, node_value[k]}
                                 : AtomDescriptor{node_value[k], mid};
    node_phase_deg[k] = rad2deg(std::arg(lut_lookup(lut, d, pol)));
  }

  auto wrap = [](double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg > 180.0) deg -= 360.0;
    if (deg <= -180.0) deg += 360.0;
    return deg;
  };

  for (int p = 0; p < out.p_count; ++p) {
    for (int q = 0; q < out.q_count; ++q) {
      const double want =
          conjugation_phase_deg(target, illumination, out.cell_x(p), out.cell_y(q));
      int best = 0;
      double best_err = std::numeric_limits<double>::infinity();
      for (int k = 0; k < lut.resolution; ++k) {
        const double err = std::abs(wrap(node_phase_deg[k] - want));
        if (err < best_err) {
          best_err = err;
          best = k;
        }
      }
      auto& d = out.descriptors[static_cast<size_t>(p) * out.q_count + q];
      if (pol == Polarization::TE) {
        d = {mid, node_value[best]};
      } else {
        d = {node_value[best], mid};
      }
    }
  }
  return out;
}

namespace {

PolReport report_for(const EmsLayout& layout, const PolTarget& target,
                     const GammaLUT& lut, Polarization pol, const EvalConfig& eval) {
  PolReport r;
  if (target.weight <= 0.0) return r;
  r.active = true;
  const GammaMap gmap = gamma_map(layout, lut, pol);
  r.cut = pattern_cut(gmap, layout, target.illumination,
                      target.reflection.phi_deg, eval.cut_samples);
  r.cut.label = std::string("cut_") + name(pol);
  r.grid = pattern_grid(gmap, layout, target.illumination, eval.grid_nu, eval.grid_nv);
  r.grid.label = std::string("grid_") + name(pol);
  r.cut_peak = peak_metrics(r.cut);
  r.grid_peak = peak_metrics(r.grid);
  const UV uv = to_direction_cosines(target.reflection);
  r.target_field_mag =
      far_field_at(gmap, layout, target.illumination, uv).norm();
  return r;
}

} // namespace

LayoutReport evaluate_layout(const EmsLayout& layout, const DesignTargets& targets,
                             const GammaLUT& lut_te, const GammaLUT& lut_tm,
                             const EvalConfig& eval) {
  LayoutReport rep;
  rep.te = report_for(layout, targets.te, lut_te, Polarization::TE, eval);
  rep.tm = report_for(layout, targets.tm, lut_tm, Polarization::TM, eval);
  const double p_te = rep.te.target_field_mag * rep.te.target_field_mag;
  const double p_tm = rep.tm.target_field_mag * rep.tm.target_field_mag;
  rep.cost = combine_cost(targets.te.weight, p_te, targets.tm.weight, p_tm);
  return rep;
}

SynthesisResult synthesize(const DesignConfig& config, int threads,
                           const ProgressSink* progress,
                           const PreparedTwin* pretrained) {
  const auto t0 = std::chrono::steady_clock::now();

  const CellSpec cell = config.make_cell();
  const AtomBounds bounds = config.make_bounds();
  PreparedTwin prepared = pretrained ? *pretrained : prepare_twin(config);

  EmsLayout layout = make_layout(config.p_count, config.q_count, cell, bounds);
  const SteeringTable steering = precompute_steering(config.targets, layout);

  const int dim = 2 * layout.cells();
  std::vector<double> lo(dim, bounds.lo), hi(dim, bounds.hi);

  const auto& lut_te = prepared.lut_te;
  const auto& lut_tm = prepared.lut_tm;
  const DesignTargets& targets = config.targets;
  Evaluator evaluator = [&](std::span<const double> x) {
    return cost(x, targets, lut_te, lut_tm, steering);
  };

  std::vector<std::vector<double>> guesses;
  if (config.warm_start) {
    std::vector<double> guess(dim, bounds.mid());
    if (targets.te.weight > 0.0) {
      const EmsLayout te_design = phase_conjugation_design(
          targets.te.reflection, targets.te.illumination, layout, lut_te,
          Polarization::TE);
      for (int i = 0; i < layout.cells(); ++i)
        guess[2 * i + 1] = te_design.descriptors[i].d2;
    }
    if (targets.tm.weight > 0.0) {
      const EmsLayout tm_design = phase_conjugation_design(
          targets.tm.reflection, targets.tm.illumination, layout, lut_tm,
          Polarization::TM);
      for (int i = 0; i < layout.cells(); ++i)
        guess[2 * i] = tm_design.descriptors[i].d1;
    }
    guesses.push_back(std::move(guess));
  }

  const SwarmResult swarm =
      optimize(evaluator, lo, hi, config.pso, threads, progress, guesses);

  for (int i = 0; i < layout.cells(); ++i) {
    layout.descriptors[i] = {swarm.best_position[2 * i],
                             swarm.best_position[2 * i + 1]};
  }

  SynthesisResult result;
  result.layout = layout;
  result.cost_history = swarm.history;
  result.evaluations = swarm.evaluations;
  result.config = config;
  result.twin = prepared.twin;

  const LayoutReport rep =
      evaluate_layout(layout, targets, lut_te, lut_tm, config.evaluation);
  result.final_cost = rep.cost;
  result.te = rep.te;
  result.tm = rep.tm;

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

namespace {

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json peak_to_json(const PeakMetrics& m) {
  return json{{"u", m.uv_peak.u},
              {"v", m.uv_peak.v},
              {"magnitude", m.magnitude_peak},
              {"sidelobe_db", finite_or_null(m.sidelobe_level_db)}};
}

json pol_report_to_json(const PolReport& r, const std::string& pol) {
  if (!r.active) return json{{"active", false}};
  return json{{"active", true},
              {"cut_peak", peak_to_json(r.cut_peak)},
              {"grid_peak", peak_to_json(r.grid_peak)},
              {"target_field_mag", r.target_field_mag},
              {"cut_csv", "pattern_" + pol + "_cut.csv"},
              {"grid_csv", "pattern_" + pol + "_grid.csv"}};
}

json layout_to_json(const EmsLayout& layout) {
  json desc = json::array();
  for (const auto& d : layout.descriptors) desc.push_back({d.d1, d.d2});
  return json{{"p", layout.p_count},
              {"q", layout.q_count},
              {"pitch_x_m", layout.cell.pitch_x_m},
              {"pitch_y_m", layout.cell.pitch_y_m},
              {"frequency_hz", layout.cell.frequency_hz},
              {"descriptors_m", desc}};
}

} // namespace

json result_to_json(const SynthesisResult& result) {
  json history = json::array();
  for (double v : result.cost_history) history.push_back(finite_or_null(v));
  return json{{"format", "mpems-result"},
              {"config", config_to_json(result.config)},
              {"layout", layout_to_json(result.layout)},
              {"final_cost", finite_or_null(result.final_cost)},
              {"cost_history", history},
              {"runtime_seconds", result.runtime_seconds},
              {"evaluations", result.evaluations},
              {"te", pol_report_to_json(result.te, "te")},
              {"tm", pol_report_to_json(result.tm, "tm")}};
}

void write_result(const SynthesisResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "result.json");
    if (!out) throw ValidationError("cannot write result.json under " + out_dir);
    out << result_to_json(result).dump(1) << "\n";
  }
  export_layout_json(result.layout, (fs::path(out_dir) / "layout.json").string());
  if (result.te.active) {
    export_pattern_csv(result.te.cut, (fs::path(out_dir) / "pattern_te_cut.csv").string());
    export_pattern_csv(result.te.grid, (fs::path(out_dir) / "pattern_te_grid.csv").string());
  }
  if (result.tm.active) {
    export_pattern_csv(result.tm.cut, (fs::path(out_dir) / "pattern_tm_cut.csv").string());
    export_pattern_csv(result.tm.grid, (fs::path(out_dir) / "pattern_tm_grid.csv").string());
  }
}

} // namespace mpems
