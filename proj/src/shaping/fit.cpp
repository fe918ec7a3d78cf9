#include "autopilot/shaping/fit.hpp"

#include "autopilot/lti/frequency.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace autopilot::shaping {

using lti::Polynomial;

namespace {

constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

/// Root locations live in a box around the sampled band: corners within kCornerMargin of
/// the grid ends, quadratic damping within [kMinDamping, kMaxDamping].
constexpr double kCornerMargin = 1e3;
constexpr double kExactFitDb = 1e-6;
constexpr double kMinDamping = 0.05, kMaxDamping = 50.0;

/// Smooth map of an unconstrained coordinate onto (lo, hi).
struct Squash {
  double mid = 0.0, half = 1.0;
  Squash(double lo, double hi) : mid(0.5 * (lo + hi)), half(0.5 * (hi - lo)) {}
  [[nodiscard]] double value(double y) const { return mid + half * std::tanh(y); }
  [[nodiscard]] double slope(double y) const {
    const double t = std::tanh(y);
    return half * (1.0 - t * t);
  }
  [[nodiscard]] double inverse(double v) const { return std::atanh(std::clamp((v - mid) / half, -0.999, 0.999)); }
};

/// Parameter layout: [log k, num quadratics (corner, damping)..., num linear (corner),
/// den quadratics..., den linear], corners in log of the normalised frequency.
struct Layout {
  int quadratics = 0;
  int linear = 0;
  Squash corner{0.0, 1.0};
  Squash damping{std::log(kMinDamping), std::log(kMaxDamping)};
  [[nodiscard]] int per_side() const { return 2 * quadratics + linear; }
  [[nodiscard]] int size() const { return 1 + 2 * per_side(); }
};

struct DbModel : Eigen::DenseFunctor<double> {
  DbModel(Layout layout, const std::vector<double>& w, const std::vector<double>& target)
      : Eigen::DenseFunctor<double>(layout.size(), static_cast<int>(w.size())), layout(layout), w(w), target(target) {}

  Layout layout;
  const std::vector<double>& w;
  const std::vector<double>& target;

  // Adds the side's dB contribution (sign +1 numerator, -1 denominator) and its gradient.
  void side(const InputType& x, int offset, double sign, double om, double& value, double* grad) const {
    const double w2 = om * om;
    int k = offset;
    for (int q = 0; q < layout.quadratics; ++q, k += 2) {
      const double wn = std::exp(layout.corner.value(x(k))), zeta = std::exp(layout.damping.value(x(k + 1)));
      const double a = 2.0 * zeta * wn, b = wn * wn;
      const double re = b - w2, im = a * om;
      const double m2 = re * re + im * im;
      value += sign * kDbPerNeper * std::log(m2);
      if (grad) {
        const double d_log_a = sign * kDbPerNeper * 2.0 * im * im / m2;
        const double d_log_b = sign * kDbPerNeper * 2.0 * re * b / m2;
        grad[k] = (d_log_a + 2.0 * d_log_b) * layout.corner.slope(x(k));
        grad[k + 1] = d_log_a * layout.damping.slope(x(k + 1));
      }
    }
    for (int l = 0; l < layout.linear; ++l, ++k) {
      const double c = std::exp(layout.corner.value(x(k)));
      const double m2 = w2 + c * c;
      value += sign * kDbPerNeper * std::log(m2);
      if (grad) grad[k] = sign * kDbPerNeper * 2.0 * c * c / m2 * layout.corner.slope(x(k));
    }
  }

  double eval(const InputType& x, double om, double* grad) const {
    double value = 2.0 * kDbPerNeper * x(0);
    if (grad) grad[0] = 2.0 * kDbPerNeper;
    side(x, 1, 1.0, om, value, grad);
    side(x, 1 + layout.per_side(), -1.0, om, value, grad);
    return value;
  }

  int operator()(const InputType& x, ValueType& f) const {
    for (std::size_t i = 0; i < w.size(); ++i) f(static_cast<Eigen::Index>(i)) = eval(x, w[i], nullptr) - target[i];
    return 0;
  }

  int df(const InputType& x, JacobianType& jac) const {
    std::vector<double> g(static_cast<std::size_t>(layout.size()));
    for (std::size_t i = 0; i < w.size(); ++i) {
      eval(x, w[i], g.data());
      for (int j = 0; j < layout.size(); ++j) jac(static_cast<Eigen::Index>(i), j) = g[static_cast<std::size_t>(j)];
    }
    return 0;
  }

  [[nodiscard]] double rms(const InputType& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double e = eval(x, w[i], nullptr) - target[i];
      s += e * e;
    }
    return std::sqrt(s / static_cast<double>(w.size()));
  }
};

Polynomial side_polynomial(const Eigen::VectorXd& x, int offset, const Layout& layout, double wref) {
  Polynomial p = Polynomial::constant(1.0);
  int k = offset;
  for (int q = 0; q < layout.quadratics; ++q, k += 2) {
    const double wn = std::exp(layout.corner.value(x(k))) * wref, zeta = std::exp(layout.damping.value(x(k + 1)));
    p = p * Polynomial{1.0, 2.0 * zeta * wn, wn * wn};
  }
  for (int l = 0; l < layout.linear; ++l, ++k) p = p * Polynomial{1.0, std::exp(layout.corner.value(x(k))) * wref};
  return p;
}

double rms_db(const TransferFunction& g, std::span<const MagnitudeSample> samples) {
  double s = 0.0;
  for (const auto& smp : samples) {
    const double e = lti::to_db(lti::magnitude(g, smp.omega)) - lti::to_db(smp.magnitude);
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(samples.size()));
}

}  // namespace

FitResult fit_minimum_phase(std::span<const MagnitudeSample> samples, int order) {
  if (order < 0) throw std::invalid_argument("fit order must be non-negative");
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (!(s.omega > 0.0) || !std::isfinite(s.omega)) throw std::invalid_argument("fit frequencies must be positive");
    if (!(s.magnitude > 0.0) || !std::isfinite(s.magnitude))
      throw std::invalid_argument("fit magnitudes must be positive and finite");
    distinct.insert(s.omega);
  }
  if (static_cast<int>(distinct.size()) < 2 * order + 1)
    throw FitError("rank-deficient fit: " + std::to_string(distinct.size()) + " distinct frequencies cannot determine an order-" +
                   std::to_string(order) + " weight; use a lower order");

  double mean_db = 0.0, log_ref = 0.0;
  for (const auto& s : samples) {
    mean_db += lti::to_db(s.magnitude);
    log_ref += std::log(s.omega);
  }
  mean_db /= static_cast<double>(samples.size());
  log_ref /= static_cast<double>(samples.size());
  if (order == 0) {
    const TransferFunction k = TransferFunction::gain(lti::from_db(mean_db));
    return {k, rms_db(k, samples)};
  }

  const double wref = std::exp(log_ref);
  std::vector<double> w, target;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : samples) {
    w.push_back(s.omega / wref);
    target.push_back(lti::to_db(s.magnitude));
    lo = std::min(lo, std::log(s.omega / wref));
    hi = std::max(hi, std::log(s.omega / wref));
  }
  const Layout layout{order / 2, order % 2, Squash(lo - std::log(kCornerMargin), hi + std::log(kCornerMargin))};
  DbModel model(layout, w, target);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> corner(lo, hi), damping(std::log(0.3), std::log(1.5));
  const int starts = 24 * order;
  Eigen::VectorXd best;
  double best_rms = std::numeric_limits<double>::infinity();
  for (int start = 0; start < starts; ++start) {
    Eigen::VectorXd x(layout.size());
    for (int side = 0; side < 2; ++side) {
      int k = 1 + side * layout.per_side();
      for (int q = 0; q < layout.quadratics; ++q, k += 2) {
        x(k) = layout.corner.inverse(corner(rng));
        x(k + 1) = layout.damping.inverse(damping(rng));
      }
      for (int l = 0; l < layout.linear; ++l, ++k) x(k) = layout.corner.inverse(corner(rng));
    }
    // gain that removes the mean residual
    x(0) = 0.0;
    Eigen::VectorXd f(static_cast<Eigen::Index>(w.size()));
    model(x, f);
    x(0) = -f.mean() / (2.0 * kDbPerNeper);

    Eigen::LevenbergMarquardt<DbModel> lm(model);
    lm.setMaxfev(400);
    lm.minimize(x);
    if (!x.allFinite()) continue;
    const double r = model.rms(x);
    if (r < best_rms) {
      best_rms = r;
      best = x;
    }
    if (best_rms < kExactFitDb) break;
  }
  if (best.size() == 0) throw FitError("minimum-phase fit did not converge");
  const Polynomial num = side_polynomial(best, 1, layout, wref).scaled(std::exp(best(0)));
  const Polynomial den = side_polynomial(best, 1 + layout.per_side(), layout, wref);
  const TransferFunction fit(num, den);
  return {fit, rms_db(fit, samples)};
}

std::vector<MagnitudeSample> centering_target(const TransferFunction& plant, const FrequencyBounds& bounds) {
  std::vector<MagnitudeSample> out;
  for (double w : bounds.grid) {
    const double centre = std::sqrt(lti::magnitude(bounds.lower, w) * lti::magnitude(bounds.upper, w));
    out.push_back({w, centre / lti::magnitude(plant, w)});
  }
  return out;
}

}  // namespace autopilot::shaping
