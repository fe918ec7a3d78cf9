#pragma once

#include "autopilot/lti/transfer_function.hpp"
#include "autopilot/shaping/bounds.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace autopilot::shaping {

struct MagnitudeSample {
  double omega = 0.0;      ///< rad/s
  double magnitude = 0.0;  ///< absolute, > 0
};

struct FitResult {
  TransferFunction fit;
  double rms_db = 0.0;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stable minimum-phase fit of the given order to sampled magnitudes, least squares in dB.
FitResult fit_minimum_phase(std::span<const MagnitudeSample> samples, int order);

/// Weight that centres plant*weight on the geometric mean of the bounds at each grid point.
std::vector<MagnitudeSample> centering_target(const TransferFunction& plant, const FrequencyBounds& bounds);

}  // namespace autopilot::shaping
