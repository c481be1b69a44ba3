#include "mpems/pso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mpems/rng.hpp"
#include "mpems/threading.hpp"

namespace mpems {

namespace {

constexpr uint32_t kStreamInit = 0;
constexpr uint32_t kStreamUpdate = 1;

double sanitize(double c) {
  return std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
}

void check_bounds(std::span<const double> lo, std::span<const double> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw ValidationError("optimizer bounds must be non-empty and matched");
  for (size_t d = 0; d < lo.size(); ++d) {
    if (!std::isfinite(lo[d]) || !std::isfinite(hi[d]) || !(lo[d] < hi[d]))
      throw ValidationError("optimizer bounds must be finite with lo < hi");
  }
}

// Mirror into [lo, hi]; flips the velocity component when it reflects.
void reflect(double& x, double& v, double lo, double hi) {
  for (int guard = 0; guard < 64 && (x < lo || x > hi); ++guard) {
    if (x < lo) {
      x = 2.0 * lo - x;
      v = -v;
    } else if (x > hi) {
      x = 2.0 * hi - x;
      v = -v;
    }
  }
  x = std::clamp(x, lo, hi); // pathological velocities land on the face
}

void evaluate_all(SwarmState& state, const Evaluator& evaluate, int threads,
                  std::vector<double>& costs) {
  const int g_count = static_cast<int>(costs.size());
  const int dim = state.dim;
  parallel_for(static_cast<size_t>(g_count), threads, [&](size_t g) {
    costs[g] = sanitize(evaluate(
        std::span<const double>(state.positions.data() + g * dim, dim)));
  });
  state.evaluations += g_count;
}

// Fixed particle-index order: identical result for any evaluation schedule.
void reduce_bests(SwarmState& state, const std::vector<double>& costs) {
  const int dim = state.dim;
  const int g_count = static_cast<int>(costs.size());
  for (int g = 0; g < g_count; ++g) {
    if (costs[g] < state.pbest_costs[g]) {
      state.pbest_costs[g] = costs[g];
      std::copy_n(state.positions.begin() + static_cast<size_t>(g) * dim, dim,
                  state.pbest_positions.begin() + static_cast<size_t>(g) * dim);
    }
    if (state.pbest_costs[g] < state.gbest_cost) {
      state.gbest_cost = state.pbest_costs[g];
      std::copy_n(state.pbest_positions.begin() + static_cast<size_t>(g) * dim,
                  dim, state.gbest_position.begin());
    }
  }
}

} // namespace

SwarmState swarm_init(const Evaluator& evaluate, std::span<const double> lo,
                      std::span<const double> hi, const SwarmConfig& config,
                      int threads,
                      std::span<const std::vector<double>> initial_guesses) {
  check_bounds(lo, hi);
  if (config.swarm_size < 2) throw ValidationError("swarm size must be >= 2");
  if (config.iterations < 1) throw ValidationError("iteration budget must be >= 1");
  if (!(config.v_max_fraction > 0.0 && config.v_max_fraction <= 1.0))
    throw ValidationError("v_max_fraction must be in (0, 1]");

  SwarmState state;
  state.dim = static_cast<int>(lo.size());
  const int g_count = config.swarm_size;
  const int dim = state.dim;
  state.positions.resize(static_cast<size_t>(g_count) * dim);
  state.velocities.assign(static_cast<size_t>(g_count) * dim, 0.0);

  for (int g = 0; g < g_count; ++g) {
    if (g < static_cast<int>(initial_guesses.size())) {
      const auto& guess = initial_guesses[g];
      if (static_cast<int>(guess.size()) != dim)
        throw ValidationError("initial guess dimension mismatch");
      for (int d = 0; d < dim; ++d) {
        state.positions[static_cast<size_t>(g) * dim + d] =
            std::clamp(guess[d], lo[d], hi[d]);
      }
      continue;
    }
    for (int d = 0; d < dim; ++d) {
      const auto r = uniform_pair(config.seed, 0, static_cast<uint32_t>(g),
                                  static_cast<uint32_t>(d), kStreamInit);
      state.positions[static_cast<size_t>(g) * dim + d] =
          lo[d] + r[0] * (hi[d] - lo[d]);
    }
  }

  std::vector<double> costs(g_count, 0.0);
  evaluate_all(state, evaluate, threads, costs);
  state.pbest_positions = state.positions;
  state.pbest_costs = costs;
  state.gbest_cost = std::numeric_limits<double>::infinity();
  state.gbest_position.assign(dim, 0.0);
  reduce_bests(state, costs);
  return state;
}

void swarm_step(SwarmState& state, const Evaluator& evaluate,
                std::span<const double> lo, std::span<const double> hi,
                const SwarmConfig& config, int threads) {
  const int dim = state.dim;
  const int g_count = static_cast<int>(state.pbest_costs.size());
  const int s = state.iteration; // 0-based index of this step
  const double frac =
      config.iterations > 1 ? static_cast<double>(s) / (config.iterations - 1) : 0.0;
  const double w =
      config.inertia_start + (config.inertia_end - config.inertia_start) * frac;

  // Everyone sees the global best of the previous iteration (synchronous
  // update); the reduction below happens after all moves are evaluated.
  const std::vector<double> gbest = state.gbest_position;

  for (int g = 0; g < g_count; ++g) {
    double* x = state.positions.data() + static_cast<size_t>(g) * dim;
    double* v = state.velocities.data() + static_cast<size_t>(g) * dim;
    const double* pb = state.pbest_positions.data() + static_cast<size_t>(g) * dim;
    for (int d = 0; d < dim; ++d) {
      const auto r =
          uniform_pair(config.seed, static_cast<uint32_t>(s + 1),
                       static_cast<uint32_t>(g), static_cast<uint32_t>(d),
                       kStreamUpdate);
      const double v_max = config.v_max_fraction * (hi[d] - lo[d]);
      double vel = w * v[d] + config.cognitive * r[0] * (pb[d] - x[d]) +
                   config.social * r[1] * (gbest[d] - x[d]);
      vel = std::clamp(vel, -v_max, v_max);
      double pos = x[d] + vel;
      reflect(pos, vel, lo[d], hi[d]);
      v[d] = vel;
      x[d] = pos;
    }
  }

  std::vector<double> costs(g_count, 0.0);
  evaluate_all(state, evaluate, threads, costs);
  reduce_bests(state, costs);
  ++state.iteration;
}

SwarmResult optimize(const Evaluator& evaluate, std::span<const double> lo,
                     std::span<const double> hi, const SwarmConfig& config,
                     int threads, const ProgressSink* progress,
                     std::span<const std::vector<double>> initial_guesses) {
  const auto t0 = std::chrono::steady_clock::now();
  SwarmState state = swarm_init(evaluate, lo, hi, config, threads, initial_guesses);

  SwarmResult result;
  result.history.reserve(config.iterations);
  double last_improved_cost = state.gbest_cost;
  int since_improvement = 0;

  for (int s = 0; s < config.iterations; ++s) {
    swarm_step(state, evaluate, lo, hi, config, threads);
    result.history.push_back(state.gbest_cost);
    if (progress) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      (*progress)({s + 1, state.gbest_cost, elapsed});
    }
    if (config.stagnation_window > 0) {
      if (state.gbest_cost < last_improved_cost) {
        last_improved_cost = state.gbest_cost;
        since_improvement = 0;
      } else if (++since_improvement >= config.stagnation_window) {
        break;
      }
    }
  }

  result.best_position = state.gbest_position;
  result.best_cost = state.gbest_cost;
  result.evaluations = state.evaluations;
  return result;
}

} // namespace mpems
