#pragma once

#include "autopilot/lti/state_space.hpp"

#include <optional>

namespace autopilot::synthesis {

using lti::Matrix;
using lti::StateSpace;

inline constexpr double kDefaultGammaFactor = 1.05;
/// Closed-loop eigenvalues must have real part below -kStabilityThreshold.
inline constexpr double kStabilityThreshold = 1e-9;

/// Normalized coprime factor data of a shaped plant.
struct NcfData {
  Matrix X;  ///< control Riccati solution
  Matrix Z;  ///< filter Riccati solution
  double gamma_min = 1.0;
  double b_opt = 1.0;
};

NcfData ncf(const StateSpace& shaped);

/// Central loop-shaping controller for the negative-feedback loop u = -K y.
/// Requires gamma > gamma_min.
StateSpace central_controller(const StateSpace& shaped, double gamma);
StateSpace central_controller(const StateSpace& shaped, const NcfData& data, double gamma);

/// Map (w1, w2) -> (v, K v) with v = (I + P K)^-1 (w1 + P w2), negative feedback.
/// Empty when the interconnection is ill-posed (I + D_p D_k singular).
std::optional<StateSpace> four_block(const StateSpace& plant, const StateSpace& controller);

/// All closed-loop eigenvalues strictly left of -kStabilityThreshold.
bool internally_stable(const StateSpace& plant, const StateSpace& controller);

/// b(P, K) = 1 / || [I; K] (I + P K)^-1 [I, P] ||_inf, or 0 when the loop is not
/// internally stable.
double achieved_margin(const StateSpace& plant, const StateSpace& controller);

}  // namespace autopilot::synthesis
