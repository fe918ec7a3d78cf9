#include "autopilot/sim/simulate.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace autopilot::sim {

using lti::Matrix;

std::vector<TimeSeries> step_responses(const StateSpace& sys, double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument("step response needs dt > 0 and t_final >= 0");
  if (sys.inputs() != 1) throw std::invalid_argument("step response needs a single input");
  const auto n = sys.states();
  const auto samples = static_cast<std::size_t>(std::llround(t_final / dt)) + 1;
  std::vector<TimeSeries> out(static_cast<std::size_t>(sys.outputs()), TimeSeries{dt, {}});
  for (auto& ts : out) ts.y.reserve(samples);

  Matrix phi = Matrix::Identity(n, n), gamma = Matrix::Zero(n, 1);
  if (n > 0) {
    Matrix aug = Matrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = sys.A() * dt;
    aug.topRightCorner(n, 1) = sys.B() * dt;
    const Matrix e = aug.exp();
    if (!e.allFinite()) throw std::runtime_error("matrix exponential overflowed");
    phi = e.topLeftCorner(n, n);
    gamma = e.topRightCorner(n, 1);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < samples; ++k) {
    const Eigen::VectorXd y = sys.C() * x + sys.D().col(0);
    for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)].y.push_back(y(i));
    x = phi * x + gamma;
  }
  return out;
}

TimeSeries step_response(const StateSpace& sys, double t_final, double dt) {
  if (sys.outputs() < 1) throw std::invalid_argument("step response needs an output");
  return step_responses(sys, t_final, dt).front();
}

double max_rate(const TimeSeries& ts) {
  double worst = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) worst = std::max(worst, std::abs(ts.y[i] - ts.y[i - 1]) / ts.dt);
  return worst;
}

StepMetrics compute_metrics(const TimeSeries& ts, double reference) { return compute_metrics(ts, ts, reference); }

StepMetrics compute_metrics(const TimeSeries& output, const TimeSeries& control, double reference) {
  if (reference == 0.0 || !std::isfinite(reference)) throw std::invalid_argument("reference must be nonzero");
  if (output.size() < 2) throw std::invalid_argument("time series too short for metrics");
  const std::size_t n = output.size();
  const std::size_t window = std::max<std::size_t>(1, n / 10);
  const std::size_t start = n - window;
  double mean = 0.0;
  for (std::size_t i = start; i < n; ++i) mean += output.y[i];
  mean /= static_cast<double>(window);
  const double band = 0.02 * (std::abs(mean) > 0.0 ? std::abs(mean) : std::abs(reference));
  for (std::size_t i = start; i < n; ++i)
    if (std::abs(output.y[i] - mean) > band) throw NotSettledError("steady state not reached");

  const double dir = reference > 0 ? 1.0 : -1.0;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (dir * output.y[i] > dir * output.y[peak]) peak = i;

  StepMetrics m;
  m.overshoot_time = output.time(peak);
  // a peak inside the settling window is still approach, not overshoot
  m.overshoot = peak < start ? std::max(0.0, dir * (output.y[peak] - mean) / std::abs(reference)) : 0.0;
  m.steady_state_error = std::abs(reference - mean) / std::abs(reference);
  m.max_rate = max_rate(control);
  return m;
}

StateSpace ClosedLoop::output() const {
  return {system.A(), system.B(), system.C().row(0), system.D().row(0)};
}
StateSpace ClosedLoop::control() const {
  return {system.A(), system.B(), system.C().row(1), system.D().row(1)};
}
StateSpace ClosedLoop::control_rate() const {
  return {system.A(), system.B(), system.C().row(2), system.D().row(2)};
}

ClosedLoop closed_loop(const StateSpace& plant, const StateSpace& controller) {
  if (!plant.is_siso() || !controller.is_siso()) throw std::invalid_argument("closed loop needs SISO plant and controller");
  const auto np = plant.states(), nk = controller.states();
  const double dp = plant.D()(0, 0), dk = controller.D()(0, 0);
  const double e = 1.0 + dp * dk;
  if (std::abs(e) < 1e-12) throw std::domain_error("feedback loop is ill-posed: 1 + P(inf) K(inf) = 0");
  // u = (Ck xk + Dk r - Dk Cp xp) / e
  Matrix cu(1, np + nk);
  cu.leftCols(np) = -dk * plant.C() / e;
  cu.rightCols(nk) = controller.C() / e;
  const double du = dk / e;
  // y = Cp xp + Dp u
  Matrix cy = dp * cu;
  cy.leftCols(np) += plant.C();
  const double dy = dp * du;

  // xp' = Ap xp + Bp u ; xk' = Ak xk + Bk (r - y)
  Matrix a = Matrix::Zero(np + nk, np + nk), b(np + nk, 1);
  a.topLeftCorner(np, np) = plant.A();
  a.topRows(np) += plant.B() * cu;
  a.bottomRightCorner(nk, nk) = controller.A();
  a.bottomRows(nk) -= controller.B() * cy;
  b.topRows(np) = plant.B() * du;
  b.bottomRows(nk) = controller.B() * (1.0 - dy);

  Matrix c(3, np + nk), d(3, 1);
  c.row(0) = cy;
  c.row(1) = cu;
  c.row(2) = cu * a;
  d << dy, du, (cu * b)(0, 0);
  return {StateSpace(a, b, c, d)};
}

ClosedLoop closed_loop(const TransferFunction& plant, const TransferFunction& controller) {
  return closed_loop(lti::balance(lti::tf_to_ss(plant)), lti::balance(lti::tf_to_ss(controller)));
}

void write_time_series_csv(std::ostream& os, double reference, const TimeSeries& y, const TimeSeries& u,
                           const TimeSeries& u_rate) {
  os << "t,y_ref,y_out,u,u_rate\n";
  os.precision(10);
  const std::size_t n = std::min({y.size(), u.size(), u_rate.size()});
  for (std::size_t i = 0; i < n; ++i)
    os << y.time(i) << ',' << reference << ',' << y.y[i] << ',' << u.y[i] << ',' << u_rate.y[i] << '\n';
}

}  // namespace autopilot::sim
