#pragma once

#include "autopilot/lti/transfer_function.hpp"

namespace autopilot::shaping {

using lti::TransferFunction;

/// First-order lead/lag pre- and post-compensators K(s + alpha)/(s + beta).
struct WeightParams {
  double K1 = 1.0, alpha1 = 1.0, beta1 = 1.0;
  double K2 = 1.0, alpha2 = 1.0, beta2 = 1.0;

  /// Throws std::invalid_argument naming the offending parameter.
  void validate() const;
};

struct Weights {
  TransferFunction w1;  ///< plant input side
  TransferFunction w2;  ///< plant output side
};

Weights make_weights(const WeightParams& p);

struct ShapedPlant {
  TransferFunction plant;
  TransferFunction w1;
  TransferFunction w2;
  TransferFunction shaped;
};

/// shaped = w2 * plant * w1
ShapedPlant shape(const TransferFunction& plant, const TransferFunction& w1, const TransferFunction& w2);

}  // namespace autopilot::shaping
