#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpems/errors.hpp"

namespace mpems {

struct SwarmConfig {
  int swarm_size = 100;  // G
  int iterations = 10000; // S
  double inertia_start = 0.9; // linear schedule
  double inertia_end = 0.4;
  double cognitive = 2.0; // c1
  double social = 2.0;    // c2
  double v_max_fraction = 0.2; // velocity clamp, fraction of per-dim range
  uint64_t seed = 1;
  // Iterations without best-cost improvement before an early stop;
  // 0 disables.
  int stagnation_window = 500;
};

using Evaluator = std::function<double(std::span<const double>)>;

struct ProgressRecord {
  int iteration = 0; // 1-based
  double best_cost = 0.0;
  double elapsed_seconds = 0.0;
};
using ProgressSink = std::function<void(const ProgressRecord&)>;

struct SwarmResult {
  std::vector<double> best_position;
  double best_cost = 0.0;
  std::vector<double> history; // best-so-far after each completed iteration
  long evaluations = 0;
};

// Exposed for the step-level contract tests; optimize() drives it.
struct SwarmState {
  int dim = 0;
  int iteration = 0; // completed iterations
  std::vector<double> positions;  // G x dim
  std::vector<double> velocities; // G x dim
  std::vector<double> pbest_positions;
  std::vector<double> pbest_costs;
  std::vector<double> gbest_position;
  double gbest_cost = 0.0;
  long evaluations = 0;
};

// All random draws are addressed by (seed, iteration, particle, dimension)
// through a counter-based generator and the global-best reduction runs in
// particle-index order, so results are independent of evaluation
// parallelism. NaN costs are treated as +inf and the run continues.
SwarmState swarm_init(const Evaluator& evaluate, std::span<const double> lo,
                      std::span<const double> hi, const SwarmConfig& config,
                      int threads = 1,
                      std::span<const std::vector<double>> initial_guesses = {});

void swarm_step(SwarmState& state, const Evaluator& evaluate,
                std::span<const double> lo, std::span<const double> hi,
                const SwarmConfig& config, int threads = 1);

SwarmResult optimize(const Evaluator& evaluate, std::span<const double> lo,
                     std::span<const double> hi, const SwarmConfig& config,
                     int threads = 1, const ProgressSink* progress = nullptr,
                     std::span<const std::vector<double>> initial_guesses = {});

} // namespace mpems
