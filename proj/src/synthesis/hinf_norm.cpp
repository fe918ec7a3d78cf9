#include "autopilot/synthesis/hinf_norm.hpp"

#include "autopilot/lti/frequency.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace autopilot::synthesis {

using lti::Complex;
using lti::Matrix;

double sigma_max(const lti::StateSpace& sys, double omega) {
  if (std::isinf(omega)) {
    if (sys.D().size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(sys.D()).singularValues()(0);
  }
  const lti::ComplexMatrix g = sys.at_frequency(omega);
  if (g.size() == 0) return 0.0;
  if (!g.allFinite()) return std::numeric_limits<double>::infinity();
  return Eigen::JacobiSVD<lti::ComplexMatrix>(g).singularValues()(0);
}

namespace {

Matrix hamiltonian(const lti::StateSpace& sys, double gamma) {
  const Matrix& a = sys.A();
  const Matrix& b = sys.B();
  const Matrix& c = sys.C();
  const Matrix& d = sys.D();
  const auto m = sys.inputs();
  const auto p = sys.outputs();
  const auto n = sys.states();
  const Matrix r = d.transpose() * d - gamma * gamma * Matrix::Identity(m, m);
  const Matrix s = d * d.transpose() - gamma * gamma * Matrix::Identity(p, p);
  const Eigen::PartialPivLU<Matrix> r_lu(r);
  const Matrix r_inv_dt_c = r_lu.solve(d.transpose() * c);
  const Matrix r_inv_bt = r_lu.solve(b.transpose());
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = a - b * r_inv_dt_c;
  h.topRightCorner(n, n) = -gamma * b * r_inv_bt;
  h.bottomLeftCorner(n, n) = gamma * c.transpose() * Eigen::PartialPivLU<Matrix>(s).solve(c);
  h.bottomRightCorner(n, n) = -a.transpose() + c.transpose() * d * r_inv_bt;
  return h;
}

std::vector<double> crossing_frequencies(const lti::StateSpace& sys, double gamma) {
  const Matrix h = hamiltonian(sys, gamma);
  const double h_scale = h.lpNorm<Eigen::Infinity>();
  std::vector<double> out;
  for (const Complex& l : lti::eigenvalues(h)) {
    const double mag = std::abs(l);
    if (std::abs(l.real()) <= 1e-6 * std::max(mag, 1e-8 * h_scale)) out.push_back(std::abs(l.imag()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

HinfNorm hinf_norm(const lti::StateSpace& sys, double rel_tol) {
  if (!lti::is_hurwitz(sys.A())) return {std::numeric_limits<double>::infinity(), false, 0.0};
  HinfNorm best{sigma_max(sys, std::numeric_limits<double>::infinity()), true,
                std::numeric_limits<double>::infinity()};
  auto probe = [&](double w) {
    const double s = sigma_max(sys, w);
    if (s > best.value) {
      best.value = s;
      best.peak_frequency = w;
    }
  };
  if (sys.states() == 0) return best;

  probe(0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Complex& l : lti::eigenvalues(sys.A())) {
    const double mag = std::abs(l);
    if (mag > 0.0) {
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    probe(std::abs(l.imag()));
    probe(mag);
  }
  if (hi > 0.0) {
    for (double w : lti::logspace(lo / 10.0, hi * 10.0, 40)) probe(w);
  }
  if (best.value == 0.0) return best;  // zero system

  for (int iter = 0; iter < 200; ++iter) {
    const double gamma = best.value * (1.0 + 2.0 * rel_tol);
    const std::vector<double> w = crossing_frequencies(sys, gamma);
    if (w.empty()) {
      best.value = gamma;
      return best;
    }
    const double before = best.value;
    for (std::size_t i = 0; i < w.size(); ++i) {
      probe(w[i]);
      if (i + 1 < w.size()) probe(0.5 * (w[i] + w[i + 1]));
    }
    if (best.value <= gamma) {
      // Crossings did not raise the lower bound: round-off level detections.
      best.value = std::max(gamma, before);
      return best;
    }
  }
  return best;
}

}  // namespace autopilot::synthesis
