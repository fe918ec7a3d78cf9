#pragma once

#include "autopilot/lti/transfer_function.hpp"

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace autopilot::lti {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Continuous-time realization x' = A x + B u, y = C x + D u.
class StateSpace {
 public:
  StateSpace() : StateSpace(Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), Matrix::Zero(1, 1)) {}
  StateSpace(Matrix a, Matrix b, Matrix c, Matrix d);

  static StateSpace gain(const Matrix& d);
  static StateSpace gain(double d) { return gain(Matrix::Constant(1, 1, d)); }

  [[nodiscard]] const Matrix& A() const { return a_; }
  [[nodiscard]] const Matrix& B() const { return b_; }
  [[nodiscard]] const Matrix& C() const { return c_; }
  [[nodiscard]] const Matrix& D() const { return d_; }
  [[nodiscard]] Eigen::Index states() const { return a_.rows(); }
  [[nodiscard]] Eigen::Index inputs() const { return b_.cols(); }
  [[nodiscard]] Eigen::Index outputs() const { return c_.rows(); }
  [[nodiscard]] bool is_siso() const { return inputs() == 1 && outputs() == 1; }

  /// C (sI - A)^-1 B + D
  [[nodiscard]] ComplexMatrix evaluate(std::complex<double> s) const;
  [[nodiscard]] ComplexMatrix at_frequency(double omega) const { return evaluate({0.0, omega}); }

 private:
  Matrix a_, b_, c_, d_;
};

/// Controllable canonical realization. Throws for improper g.
StateSpace tf_to_ss(const TransferFunction& g);
/// SISO only; common factors cancelled within kCancellationTolerance.
TransferFunction ss_to_tf(const StateSpace& sys);

std::vector<Complex> eigenvalues(const Matrix& a);
/// Real parts of all eigenvalues below -threshold.
bool is_hurwitz(const Matrix& a, double threshold = 0.0);
double spectral_abscissa(const Matrix& a);

/// Output of `first` feeds the input of `second`: y = second(first(u)).
StateSpace series(const StateSpace& first, const StateSpace& second);
StateSpace scale(const StateSpace& sys, double k);
/// Block-diagonal stacking, inputs and outputs concatenated.
StateSpace append(const StateSpace& a, const StateSpace& b);
/// Diagonal similarity transform that equalises row/column norms of A.
StateSpace balance(const StateSpace& sys);

struct BalancedMatrix {
  Matrix matrix;
  Vector scaling;  ///< matrix = diag(scaling)^-1 * input * diag(scaling)
};
/// Parlett-Reinsch style power-of-two diagonal balancing (no permutations).
BalancedMatrix balance_matrix(const Matrix& a);

}  // namespace autopilot::lti
