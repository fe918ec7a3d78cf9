#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace autopilot::pso {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct SwarmConfig {
  int particle_count = 40;
  int iterations = 300;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::vector<Interval> bounds;
  std::uint64_t seed = 1;
  /// Cost evaluation workers (0 = hardware concurrency). Never changes results.
  unsigned threads = 0;

  /// Throws std::invalid_argument on a bad setting.
  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_cost = 0.0;
};

struct SwarmResult {
  std::vector<double> best_position;
  double best_cost = 0.0;
  /// Global best after initialisation (entry 0) and after each iteration.
  std::vector<double> history;
  std::vector<std::vector<double>> history_positions;
};

using CostFunction = std::function<double(std::span<const double>)>;

/// Global-best PSO. The cost must be safe to call concurrently; non-finite costs count as +inf.
SwarmResult pso_minimize(const CostFunction& cost, const SwarmConfig& config);

}  // namespace autopilot::pso
