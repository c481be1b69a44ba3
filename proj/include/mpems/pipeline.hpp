#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpems/fields.hpp"
#include "mpems/objective.hpp"
#include "mpems/pso.hpp"
#include "mpems/surrogate.hpp"

namespace mpems {

struct TwinConfig {
  std::string source = "synthetic"; // "synthetic" | "table"
  std::string table_path;
  int training_n = 400; // Latin-hypercube points per incidence angle
  uint64_t seed = 12345;
  int lut_resolution = 128;
  int cv_folds = 5;
  uint64_t cv_seed = 99;
};

struct EvalConfig {
  int cut_samples = 721;
  int grid_nu = 40;
  int grid_nv = 40;
};

struct DesignConfig {
  int p_count = 20;
  int q_count = 20;
  double frequency_hz = 28e9;
  double pitch_fraction = 0.4;
  double bounds_lo_fraction = 0.05;
  double bounds_hi_fraction = 0.95;
  SubstrateInfo substrate{};
  DesignTargets targets{};
  TwinConfig twin{};
  SwarmConfig pso{};
  EvalConfig evaluation{};
  // Seeds one swarm particle from a per-polarization phase-conjugation
  // compromise (TE sets the d2 axis, TM the d1 axis). Off by default; the
  // plain run is a pure global search.
  bool warm_start = false;

  CellSpec make_cell() const;
  AtomBounds make_bounds() const;
};

DesignConfig default_config();

// Strict schema: unknown keys are rejected, missing keys take defaults.
DesignConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const DesignConfig& config);
DesignConfig load_config(const std::string& path);

// Dotted-path override, e.g. "pso.seed=7". Throws listing valid keys when
// the path does not name a config leaf.
void apply_override(nlohmann::json& config_json, const std::string& assignment);

struct PolReport {
  bool active = false;
  PeakMetrics cut_peak{};
  PeakMetrics grid_peak{};
  double target_field_mag = 0.0;
  FarFieldPattern cut{};
  FarFieldPattern grid{};
};

struct SynthesisResult {
  EmsLayout layout{};
  double final_cost = 0.0;
  std::vector<double> cost_history;
  double runtime_seconds = 0.0;
  long evaluations = 0;
  PolReport te{}, tm{};
  DesignConfig config{};
  GammaTwin twin{}; // as trained for this run; LUTs recompile from it
};

// Full loop: sample -> train twin -> compile LUTs -> swarm-optimize the
// 2*P*Q descriptor vector -> evaluate patterns. Deterministic per seeds for
// any thread count. A pretrained twin skips the sampling/training stage.
struct PreparedTwin;
SynthesisResult synthesize(const DesignConfig& config, int threads = 1,
                           const ProgressSink* progress = nullptr,
                           const PreparedTwin* pretrained = nullptr);

// Single-polarization analytic reference design: per-cell ideal phase
// -k0[(ur+ui)x + (vr+vi)y] wrapped to (-180, 180], realized by scanning the
// LUT's dominant-descriptor axis (TE -> d2, TM -> d1) with the other
// descriptor at mid-range.
EmsLayout phase_conjugation_design(const Direction& target,
                                   const PlaneWaveSpec& illumination,
                                   const EmsLayout& geometry,
                                   const GammaLUT& lut, Polarization pol);

// Ideal per-cell phase of the design above, degrees in (-180, 180].
double conjugation_phase_deg(const Direction& target,
                             const PlaneWaveSpec& illumination, double cell_x,
                             double cell_y);

struct LayoutReport {
  double cost = 0.0;
  PolReport te{}, tm{};
};

LayoutReport evaluate_layout(const EmsLayout& layout, const DesignTargets& targets,
                             const GammaLUT& lut_te, const GammaLUT& lut_tm,
                             const EvalConfig& eval);

// result.json + pattern CSVs + layout.json under out_dir.
void write_result(const SynthesisResult& result, const std::string& out_dir);
nlohmann::json result_to_json(const SynthesisResult& result);

// Twin + per-polarization LUT preparation shared by synthesize and the CLI
// tooling. Returned LUTs are keyed by the active polarizations' incidence
// angles.
struct PreparedTwin {
  GammaTwin twin{};
  GammaLUT lut_te{};
  GammaLUT lut_tm{};
};
PreparedTwin prepare_twin(const DesignConfig& config);
PreparedTwin prepare_luts(const GammaTwin& twin, const DesignConfig& config);

std::vector<ReflectionSample> build_training_set(const DesignConfig& config);

} // namespace mpems
