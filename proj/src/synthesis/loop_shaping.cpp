#include "autopilot/synthesis/loop_shaping.hpp"

#include "autopilot/synthesis/care.hpp"
#include "autopilot/synthesis/hinf_norm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace autopilot::synthesis {

NcfData ncf(const StateSpace& shaped) {
  const auto n = shaped.states();
  if (n == 0) return {Matrix(0, 0), Matrix(0, 0), 1.0, 1.0};
  const Matrix& a = shaped.A();
  const Matrix& b = shaped.B();
  const Matrix& c = shaped.C();
  const Matrix& d = shaped.D();
  const Matrix s = Matrix::Identity(d.cols(), d.cols()) + d.transpose() * d;
  const Matrix r = Matrix::Identity(d.rows(), d.rows()) + d * d.transpose();
  const Matrix ac = a - b * s.ldlt().solve(d.transpose() * c);

  NcfData out;
  out.X = solve_care({ac, b, c.transpose() * r.ldlt().solve(c), s});
  out.Z = solve_care({ac.transpose(), c.transpose(), b * s.ldlt().solve(b.transpose()), r});
  double rho = 0.0;
  Eigen::EigenSolver<Matrix> es(out.X * out.Z, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rho = std::max(rho, es.eigenvalues()(i).real());
  out.gamma_min = std::sqrt(1.0 + rho);
  out.b_opt = 1.0 / out.gamma_min;
  return out;
}

StateSpace central_controller(const StateSpace& shaped, double gamma) {
  return central_controller(shaped, ncf(shaped), gamma);
}

StateSpace central_controller(const StateSpace& shaped, const NcfData& data, double gamma) {
  if (!(gamma > data.gamma_min))
    throw std::invalid_argument("central controller requires gamma > gamma_min (" + std::to_string(data.gamma_min) +
                                ")");
  const Matrix& a = shaped.A();
  const Matrix& b = shaped.B();
  const Matrix& c = shaped.C();
  const Matrix& d = shaped.D();
  const auto n = shaped.states();
  if (n == 0) return StateSpace::gain(Matrix(d.transpose()));
  const Matrix s = Matrix::Identity(d.cols(), d.cols()) + d.transpose() * d;
  const Matrix f = -s.ldlt().solve(d.transpose() * c + b.transpose() * data.X);
  const double g2 = gamma * gamma;
  const Matrix l = (1.0 - g2) * Matrix::Identity(n, n) + data.X * data.Z;
  // gamma^2 (L')^-1 Z C'
  const Matrix bk = g2 * l.transpose().partialPivLu().solve(data.Z * c.transpose());
  const Matrix ak = a + b * f + bk * (c + d * f);
  // Negated output map converts the positive-feedback central form to u = -K y.
  return {ak, bk, -b.transpose() * data.X, Matrix(d.transpose())};
}

std::optional<StateSpace> four_block(const StateSpace& plant, const StateSpace& controller) {
  const auto p = plant.outputs(), m = plant.inputs();
  if (controller.inputs() != p || controller.outputs() != m)
    throw std::invalid_argument("four_block: controller dimensions incompatible with plant");
  const auto np = plant.states(), nk = controller.states();
  const Matrix& dp = plant.D();
  const Matrix& dk = controller.D();
  const Matrix ipdk = Matrix::Identity(p, p) + dp * dk;
  Eigen::FullPivLU<Matrix> lu(ipdk);
  if (lu.rank() < p || std::abs(lu.rcond()) < 1e-12) return std::nullopt;
  const Matrix e = lu.inverse();

  Matrix cx(p, np + nk);
  cx << plant.C(), -dp * controller.C();
  Matrix cw(p, p + m);
  cw << Matrix::Identity(p, p), dp;
  const Matrix vx = e * cx;
  const Matrix vw = e * cw;
  Matrix ux0 = Matrix::Zero(m, np + nk);
  ux0.rightCols(nk) = -controller.C();
  Matrix uw0 = Matrix::Zero(m, p + m);
  uw0.rightCols(m) = Matrix::Identity(m, m);
  const Matrix ux = ux0 - dk * vx;
  const Matrix uw = uw0 - dk * vw;

  Matrix a = Matrix::Zero(np + nk, np + nk);
  a.topLeftCorner(np, np) = plant.A();
  a.bottomRightCorner(nk, nk) = controller.A();
  a.topRows(np) += plant.B() * ux;
  a.bottomRows(nk) += controller.B() * vx;
  Matrix b(np + nk, p + m);
  b.topRows(np) = plant.B() * uw;
  b.bottomRows(nk) = controller.B() * vw;
  Matrix ck0 = Matrix::Zero(m, np + nk);
  ck0.rightCols(nk) = controller.C();
  Matrix c(p + m, np + nk);
  c.topRows(p) = vx;
  c.bottomRows(m) = ck0 + dk * vx;
  Matrix dd(p + m, p + m);
  dd.topRows(p) = vw;
  dd.bottomRows(m) = dk * vw;
  return StateSpace(a, b, c, dd);
}

bool internally_stable(const StateSpace& plant, const StateSpace& controller) {
  const auto loop = four_block(plant, controller);
  return loop && lti::is_hurwitz(loop->A(), kStabilityThreshold);
}

double achieved_margin(const StateSpace& plant, const StateSpace& controller) {
  const auto loop = four_block(plant, controller);
  if (!loop || !lti::is_hurwitz(loop->A(), kStabilityThreshold)) return 0.0;
  const HinfNorm norm = hinf_norm(*loop);
  if (!norm.finite || !(norm.value > 0.0)) return 0.0;
  return std::min(1.0, 1.0 / norm.value);
}

}  // namespace autopilot::synthesis
