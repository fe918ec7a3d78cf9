#pragma once

#include "autopilot/lti/state_space.hpp"

namespace autopilot::synthesis {

struct HinfNorm {
  double value = 0.0;
  bool finite = true;           ///< false when A is not Hurwitz; value is then +inf
  double peak_frequency = 0.0;  ///< rad/s where the lower bound was attained (inf for the D term)
};

/// Largest singular value of sys(j omega).
double sigma_max(const lti::StateSpace& sys, double omega);

/// H-infinity norm by iterating on gamma with the imaginary-axis eigenvalues of the
/// associated Hamiltonian: each level gamma either certifies an upper bound (no
/// imaginary eigenvalues) or yields crossing frequencies whose midpoints raise the
/// lower bound. Terminates with upper/lower ratio below 1 + 2 rel_tol.
HinfNorm hinf_norm(const lti::StateSpace& sys, double rel_tol = 1e-8);

}  // namespace autopilot::synthesis
