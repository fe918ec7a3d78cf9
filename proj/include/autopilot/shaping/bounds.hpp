#pragma once

#include "autopilot/lti/transfer_function.hpp"

#include <iosfwd>
#include <vector>

namespace autopilot::shaping {

using lti::TransferFunction;

struct FrequencyBounds {
  TransferFunction lower;
  TransferFunction upper;
  std::vector<double> grid;  ///< rad/s
};

/// 100 log-spaced points over [0.01, 1e4] rad/s.
std::vector<double> default_bound_grid();

/// The published lower/upper loop templates, identical poles and zeros with gains 3 and 10.
FrequencyBounds published_bounds(std::vector<double> grid = default_bound_grid());

struct BoundPoint {
  double omega = 0.0;
  double loop_db = 0.0;
  double low_db = 0.0;
  double high_db = 0.0;
  bool pass = false;
  double violation_db = 0.0;  ///< distance outside the band, 0 when inside
};

struct BoundReport {
  std::vector<BoundPoint> points;
  double worst_violation_db = 0.0;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] double pass_fraction() const;
  [[nodiscard]] std::vector<BoundPoint> violations() const;
};

BoundReport check_bounds(const TransferFunction& loop, const FrequencyBounds& bounds);

/// |loop(j omega)| <= |plant(j omega)| * 10^(-reduction_db/20), relative slack 1e-9.
bool check_rolloff(const TransferFunction& loop, const TransferFunction& plant, double omega, double reduction_db);

/// Columns omega_rad_s, loop_db, low_db, high_db, pass.
void write_bound_csv(std::ostream& os, const BoundReport& report);

}  // namespace autopilot::shaping
