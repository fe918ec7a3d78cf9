#pragma once

#include "autopilot/lti/state_space.hpp"

#include <stdexcept>
#include <string>

namespace autopilot::synthesis {

using lti::Matrix;

/// A'X + XA - X B R^-1 B' X + Q = 0
struct CareProblem {
  Matrix A, B, Q, R;
};

class CareError : public std::runtime_error {
 public:
  enum class Kind { InvalidInput, ImaginaryAxisEigenvalues, NotStabilizable };
  CareError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Stabilizing solution via the ordered real Schur form of the Hamiltonian.
/// Throws CareError naming the failure mode.
Matrix solve_care(const CareProblem& p);

/// Frobenius norm of the Riccati residual.
double care_residual(const CareProblem& p, const Matrix& x);

}  // namespace autopilot::synthesis
