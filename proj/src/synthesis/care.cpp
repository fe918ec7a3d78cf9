#include "autopilot/synthesis/care.hpp"

#include "autopilot/lti/state_space.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <lapacke.h>

#include <cmath>
#include <vector>

namespace autopilot::synthesis {

namespace {

lapack_logical select_stable(const double* re, const double* /*im*/) { return *re < 0.0; }

void validate(const CareProblem& p) {
  const auto n = p.A.rows();
  if (p.A.cols() != n) throw CareError(CareError::Kind::InvalidInput, "CARE: A must be square");
  if (p.B.rows() != n) throw CareError(CareError::Kind::InvalidInput, "CARE: B rows must match A");
  if (p.Q.rows() != n || p.Q.cols() != n) throw CareError(CareError::Kind::InvalidInput, "CARE: Q must be n x n");
  const auto m = p.B.cols();
  if (p.R.rows() != m || p.R.cols() != m) throw CareError(CareError::Kind::InvalidInput, "CARE: R must be m x m");
  const double qs = std::max(1.0, p.Q.norm()), rs = std::max(1.0, p.R.norm());
  if ((p.Q - p.Q.transpose()).norm() > 1e-12 * qs)
    throw CareError(CareError::Kind::InvalidInput, "CARE: Q is not symmetric");
  if ((p.R - p.R.transpose()).norm() > 1e-12 * rs)
    throw CareError(CareError::Kind::InvalidInput, "CARE: R is not symmetric");
  if (m > 0 && p.R.fullPivLu().rank() < m) throw CareError(CareError::Kind::InvalidInput, "CARE: R is singular");
}

}  // namespace

Matrix solve_care(const CareProblem& p) {
  validate(p);
  const auto n = p.A.rows();
  if (n == 0) return Matrix(0, 0);
  const Matrix g = p.B * p.R.ldlt().solve(p.B.transpose());

  Matrix h(2 * n, 2 * n);
  h << p.A, -g, -p.Q, -p.A.transpose();
  // Diagonal similarity keeps the stable subspace and tames badly scaled realizations.
  const lti::BalancedMatrix bal = lti::balance_matrix(h);
  const double h_scale = std::max(1.0, bal.matrix.lpNorm<Eigen::Infinity>());

  // LAPACK wants column-major storage, which is Eigen's default.
  Matrix t = bal.matrix;
  Matrix vs(2 * n, 2 * n);
  std::vector<double> wr(static_cast<std::size_t>(2 * n)), wi(static_cast<std::size_t>(2 * n));
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_stable, static_cast<lapack_int>(2 * n), t.data(),
                    static_cast<lapack_int>(2 * n), &sdim, wr.data(), wi.data(), vs.data(),
                    static_cast<lapack_int>(2 * n));
  if (info != 0 && info != 2 * n + 2)
    throw CareError(CareError::Kind::InvalidInput, "CARE: Schur decomposition failed (info " + std::to_string(info) + ")");

  for (std::size_t i = 0; i < wr.size(); ++i) {
    const double mag = std::hypot(wr[i], wi[i]);
    if (std::abs(wr[i]) <= 1e-10 * std::max(h_scale, mag))
      throw CareError(CareError::Kind::ImaginaryAxisEigenvalues,
                      "CARE: Hamiltonian has eigenvalues on the imaginary axis");
  }
  if (sdim != n)
    throw CareError(CareError::Kind::NotStabilizable,
                    "CARE: stable invariant subspace has dimension " + std::to_string(sdim) + ", expected " +
                        std::to_string(n));

  Matrix basis = bal.scaling.asDiagonal() * vs.leftCols(n);
  const Eigen::RowVectorXd col_norms = basis.colwise().norm();
  basis = (basis * col_norms.cwiseInverse().asDiagonal()).eval();
  const Matrix u1 = basis.topRows(n);
  const Matrix u2 = basis.bottomRows(n);
  Eigen::FullPivLU<Matrix> lu(u1);
  if (lu.rank() < n || std::abs(lu.rcond()) < 1e-14)
    throw CareError(CareError::Kind::NotStabilizable, "CARE: (A, B) not stabilizable; U1 is singular");
  // X = U2 U1^-1  <=>  U1' X' = U2'
  Matrix x = u1.transpose().fullPivLu().solve(u2.transpose()).transpose();
  x = (0.5 * (x + x.transpose())).eval();
  return x;
}

double care_residual(const CareProblem& p, const Matrix& x) {
  const Matrix g = p.B * p.R.ldlt().solve(p.B.transpose());
  return (p.A.transpose() * x + x * p.A - x * g * x + p.Q).norm();
}

}  // namespace autopilot::synthesis
