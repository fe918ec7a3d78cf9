#pragma once

#include "autopilot/lti/state_space.hpp"
#include "autopilot/lti/transfer_function.hpp"

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace autopilot::sim {

using lti::StateSpace;
using lti::TransferFunction;

/// Uniformly sampled signal starting at t = 0.
struct TimeSeries {
  double dt = 0.0;
  std::vector<double> y;

  [[nodiscard]] std::size_t size() const { return y.size(); }
  [[nodiscard]] double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

struct StepMetrics {
  double overshoot_time = 0.0;  ///< s
  double overshoot = 0.0;       ///< fraction of the reference
  double steady_state_error = 0.0;
  double max_rate = 0.0;  ///< per second
};

class NotSettledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unit-step response of every output, exact zero-order-hold discretization.
std::vector<TimeSeries> step_responses(const StateSpace& sys, double t_final, double dt);
/// First output only.
TimeSeries step_response(const StateSpace& sys, double t_final, double dt);

/// Maximum absolute first-difference rate.
double max_rate(const TimeSeries& ts);

/// Final value is the mean of the last 10% of samples, which must lie within 2% of it.
/// max_rate is taken from `ts` itself.
StepMetrics compute_metrics(const TimeSeries& ts, double reference);
/// Same, with max_rate taken from the control signal.
StepMetrics compute_metrics(const TimeSeries& output, const TimeSeries& control, double reference);

/// Negative unity feedback of plant and controller. Outputs: y, u, du/dt (the rate
/// channel omits the impulse a direct feedthrough would add at t = 0).
struct ClosedLoop {
  StateSpace system;

  [[nodiscard]] StateSpace output() const;
  [[nodiscard]] StateSpace control() const;
  [[nodiscard]] StateSpace control_rate() const;
};

ClosedLoop closed_loop(const StateSpace& plant, const StateSpace& controller);
ClosedLoop closed_loop(const TransferFunction& plant, const TransferFunction& controller);

/// Columns t, y_ref, y_out, u, u_rate.
void write_time_series_csv(std::ostream& os, double reference, const TimeSeries& y, const TimeSeries& u,
                           const TimeSeries& u_rate);

}  // namespace autopilot::sim
