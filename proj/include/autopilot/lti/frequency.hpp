#pragma once

#include "autopilot/lti/transfer_function.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace autopilot::lti {

struct FrequencyPoint {
  double omega = 0.0;  ///< rad/s
  Complex value;
  bool at_pole = false;  ///< denominator vanished at j*omega; value is not meaningful

  [[nodiscard]] double magnitude() const { return std::abs(value); }
  [[nodiscard]] double mag_db() const;
  [[nodiscard]] double phase_deg() const;
};

std::vector<FrequencyPoint> freq_response(const TransferFunction& g, std::span<const double> omegas);

/// |g(j omega)|, +inf at a pole.
double magnitude(const TransferFunction& g, double omega);
inline double to_db(double magnitude) { return 20.0 * std::log10(magnitude); }
inline double from_db(double db) { return std::pow(10.0, db / 20.0); }

/// n points log-spaced over [lo, hi] inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Columns omega_rad_s, re, im, mag_db, phase_deg.
void write_frequency_csv(std::ostream& os, std::span<const FrequencyPoint> points);

}  // namespace autopilot::lti
