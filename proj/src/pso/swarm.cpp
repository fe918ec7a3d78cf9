#include "autopilot/pso/swarm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace autopilot::pso {

void SwarmConfig::validate() const {
  if (particle_count < 2) throw std::invalid_argument("PSO needs at least 2 particles");
  if (iterations < 1) throw std::invalid_argument("PSO needs at least 1 iteration");
  if (bounds.empty()) throw std::invalid_argument("PSO search box has no dimensions");
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (!(bounds[i].lo < bounds[i].hi) || !std::isfinite(bounds[i].lo) || !std::isfinite(bounds[i].hi))
      throw std::invalid_argument("PSO bound " + std::to_string(i) + " must satisfy min < max");
  if (!(cognitive >= 0.0) || !(social >= 0.0)) throw std::invalid_argument("PSO c1 and c2 must be non-negative");
  if (!std::isfinite(inertia)) throw std::invalid_argument("PSO inertia must be finite");
}

namespace {

/// Evaluates cost(position_i) for all particles into `out`. Each index is written by one worker.
void evaluate_all(const CostFunction& cost, const std::vector<Particle>& swarm, std::vector<double>& out,
                  unsigned threads) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < swarm.size(); i = next++) {
      try {
        const double c = cost(swarm[i].position);
        out[i] = std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SwarmResult pso_minimize(const CostFunction& cost, const SwarmConfig& config) {
  config.validate();
  const std::size_t dims = config.bounds.size();
  const auto n = static_cast<std::size_t>(config.particle_count);
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));

  // One stream per particle so evaluation order cannot affect the draws.
  std::vector<std::mt19937_64> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(i), 0x9e3779b9u};
    streams.emplace_back(seq);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Particle> swarm(n);
  for (std::size_t i = 0; i < n; ++i) {
    Particle& p = swarm[i];
    p.position.resize(dims);
    p.velocity.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const auto [lo, hi] = config.bounds[d];
      p.position[d] = lo + (hi - lo) * unit(streams[i]);
      p.velocity[d] = 0.1 * (hi - lo) * (2.0 * unit(streams[i]) - 1.0);
    }
  }
  std::vector<double> costs(n);
  evaluate_all(cost, swarm, costs, threads);

  std::size_t g = 0;
  for (std::size_t i = 0; i < n; ++i) {
    swarm[i].best_position = swarm[i].position;
    swarm[i].best_cost = costs[i];
    if (costs[i] < costs[g]) g = i;
  }
  SwarmResult result{swarm[g].best_position, swarm[g].best_cost, {}, {}};
  result.history.push_back(result.best_cost);
  result.history_positions.push_back(result.best_position);

  for (int it = 0; it < config.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      Particle& p = swarm[i];
      for (std::size_t d = 0; d < dims; ++d) {
        const double r1 = unit(streams[i]), r2 = unit(streams[i]);
        p.velocity[d] = config.inertia * p.velocity[d] + config.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                        config.social * r2 * (result.best_position[d] - p.position[d]);
        p.position[d] += p.velocity[d];
        const auto [lo, hi] = config.bounds[d];
        if (p.position[d] < lo || p.position[d] > hi) {
          p.position[d] = std::clamp(p.position[d], lo, hi);
          p.velocity[d] = 0.0;
        }
      }
    }
    evaluate_all(cost, swarm, costs, threads);
    for (std::size_t i = 0; i < n; ++i) {
      if (costs[i] < swarm[i].best_cost) {
        swarm[i].best_cost = costs[i];
        swarm[i].best_position = swarm[i].position;
      }
      if (swarm[i].best_cost < result.best_cost) {
        result.best_cost = swarm[i].best_cost;
        result.best_position = swarm[i].best_position;
      }
    }
    result.history.push_back(result.best_cost);
    result.history_positions.push_back(result.best_position);
  }
  return result;
}

}  // namespace autopilot::pso
