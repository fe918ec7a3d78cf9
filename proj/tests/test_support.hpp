#pragma once

#include "autopilot/lti/state_space.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace test_support {

using autopilot::lti::Complex;
using autopilot::lti::Matrix;
using autopilot::lti::Polynomial;
using autopilot::lti::StateSpace;
using autopilot::lti::TransferFunction;

/// 863878246 (s-30)(s+25) / ((s+121)(s+3)(s^2+20s+7933)), assembled from its printed factors.
inline TransferFunction printed_open_loop_plant() {
  const Polynomial num = Polynomial{1.0, -30.0} * Polynomial{1.0, 25.0};
  const Polynomial den = Polynomial{1.0, 121.0} * Polynomial{1.0, 3.0} * Polynomial{1.0, 20.0, 7933.0};
  return {num.scaled(863878246.0), den};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random stable SISO transfer function of the given order, numerator degree <= order.
inline TransferFunction random_stable_tf(std::mt19937_64& rng, int order, bool strictly_proper = false) {
  std::vector<Complex> poles;
  while (static_cast<int>(poles.size()) < order) {
    if (order - static_cast<int>(poles.size()) >= 2 && uniform(rng, 0, 1) < 0.4) {
      const double re = -uniform(rng, 0.05, 5.0), im = uniform(rng, 0.1, 10.0);
      poles.emplace_back(re, im);
      poles.emplace_back(re, -im);
    } else {
      poles.emplace_back(-uniform(rng, 0.1, 10.0), 0.0);
    }
  }
  const int max_nz = strictly_proper ? order - 1 : order;
  const int nz = max_nz <= 0 ? 0 : static_cast<int>(std::uniform_int_distribution<int>(0, max_nz)(rng));
  std::vector<Complex> zeros;
  while (static_cast<int>(zeros.size()) < nz) {
    if (nz - static_cast<int>(zeros.size()) >= 2 && uniform(rng, 0, 1) < 0.3) {
      const double re = uniform(rng, -5.0, 5.0), im = uniform(rng, 0.1, 10.0);
      zeros.emplace_back(re, im);
      zeros.emplace_back(re, -im);
    } else {
      zeros.emplace_back(uniform(rng, -10.0, 10.0), 0.0);
    }
  }
  const double k = uniform(rng, 0.2, 5.0) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
  return TransferFunction::from_zpk(zeros, poles, k);
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

/// Random Hurwitz state-space system.
inline StateSpace random_stable_ss(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m, Eigen::Index p,
                                   bool with_d = true) {
  Matrix a = random_matrix(rng, n, n);
  const double shift = autopilot::lti::spectral_abscissa(a) + uniform(rng, 0.05, 1.0);
  a -= shift * Matrix::Identity(n, n);
  Matrix d = with_d ? random_matrix(rng, p, m) : Matrix::Zero(p, m);
  return {a, random_matrix(rng, n, m), random_matrix(rng, p, n), d};
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random strictly proper plant; with allow_unstable, about 30% get all poles mirrored into the RHP.
inline TransferFunction random_plant(std::mt19937_64& rng, int order, bool allow_unstable) {
  TransferFunction g = random_stable_tf(rng, order, true);
  if (allow_unstable && uniform(rng, 0, 1) < 0.3) {
    auto p = autopilot::lti::poles(g);
    for (auto& z : p) z = Complex(-z.real(), z.imag());
    g = TransferFunction(g.numerator(), Polynomial::from_roots(p));
  }
  return g;
}

/// Multiplicative coefficient jitter of relative size eps.
inline TransferFunction perturb(std::mt19937_64& rng, const TransferFunction& g, double eps) {
  auto jitter = [&](const Polynomial& p, bool keep_lead) {
    std::vector<double> c = p.coefficients();
    for (std::size_t i = keep_lead ? 1 : 0; i < c.size(); ++i) c[i] *= 1.0 + eps * uniform(rng, -1, 1);
    return Polynomial(c);
  };
  return {jitter(g.numerator(), false), jitter(g.denominator(), true)};
}

}  // namespace test_support
