#include "autopilot/lti/transfer_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace autopilot::lti {

TransferFunction::TransferFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw std::invalid_argument("transfer function denominator is identically zero");
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1.0);
    return;
  }
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ = num_.scaled(1.0 / lead);
    den_ = den_.scaled(1.0 / lead);
  }
}

TransferFunction TransferFunction::from_zpk(std::span<const Complex> zeros, std::span<const Complex> poles,
                                            double k) {
  return {Polynomial::from_roots(zeros, k), Polynomial::from_roots(poles)};
}

double TransferFunction::dc_gain() const {
  const double d = den_.coefficient(0);
  const double n = num_.coefficient(0);
  if (d == 0.0) {
    if (n == 0.0) return minreal().dc_gain();
    return n > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return n / d;
}

double TransferFunction::high_frequency_gain() const {
  if (num_.is_zero()) return 0.0;
  if (num_.degree() < den_.degree()) return 0.0;
  if (num_.degree() > den_.degree())
    return num_.leading() > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return num_.leading() / den_.leading();
}

TransferFunction TransferFunction::minreal(double tolerance) const {
  if (num_.is_zero() || num_.degree() == 0 || den_.degree() == 0) return *this;
  std::vector<Complex> z = num_.roots();
  std::vector<Complex> p = den_.roots();
  std::vector<bool> z_used(z.size(), false);
  std::vector<Complex> p_keep;
  bool cancelled = false;
  for (const Complex& pole : p) {
    std::size_t best = z.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z_used[i]) continue;
      const double dist = std::abs(pole - z[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best < z.size() && best_dist < tolerance * std::max(1.0, std::abs(pole))) {
      z_used[best] = true;
      cancelled = true;
    } else {
      p_keep.push_back(pole);
    }
  }
  if (!cancelled) return *this;
  std::vector<Complex> z_keep;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!z_used[i]) z_keep.push_back(z[i]);
  return {Polynomial::from_roots(z_keep, num_.leading()), Polynomial::from_roots(p_keep)};
}

std::string TransferFunction::to_string() const {
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

TransferFunction series(const TransferFunction& g1, const TransferFunction& g2) {
  return TransferFunction(g1.numerator() * g2.numerator(), g1.denominator() * g2.denominator()).minreal();
}

TransferFunction parallel(const TransferFunction& g1, const TransferFunction& g2) {
  return TransferFunction(g1.numerator() * g2.denominator() + g2.numerator() * g1.denominator(),
                          g1.denominator() * g2.denominator())
      .minreal();
}

TransferFunction scale(const TransferFunction& g, double k) {
  return {g.numerator().scaled(k), g.denominator()};
}

TransferFunction feedback(const TransferFunction& g, const TransferFunction& h) {
  Polynomial den = g.denominator() * h.denominator() + g.numerator() * h.numerator();
  if (den.is_zero()) throw std::domain_error("feedback interconnection is degenerate: 1 + g h is identically zero");
  return TransferFunction(g.numerator() * h.denominator(), std::move(den)).minreal();
}

TransferFunction feedback_unity(const TransferFunction& g) { return feedback(g, TransferFunction::gain(1.0)); }

std::vector<Complex> poles(const TransferFunction& g) { return g.denominator().roots(); }

std::vector<Complex> zeros(const TransferFunction& g) {
  if (g.is_zero()) return {};
  return g.numerator().roots();
}

bool is_stable(const TransferFunction& g) {
  const auto p = poles(g);
  return std::all_of(p.begin(), p.end(), [](const Complex& z) { return z.real() < 0.0; });
}

bool is_minimum_phase(const TransferFunction& g) {
  if (!is_stable(g)) return false;
  const auto z = zeros(g);
  return std::all_of(z.begin(), z.end(), [](const Complex& r) { return r.real() < 0.0; });
}

int count_rhp(std::span<const Complex> roots, double axis_tolerance) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](const Complex& r) {
    return r.real() > axis_tolerance * std::max(1.0, std::abs(r));
  }));
}

int count_axis(std::span<const Complex> roots, double axis_tolerance) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](const Complex& r) {
    return std::abs(r.real()) <= axis_tolerance * std::max(1.0, std::abs(r));
  }));
}

}  // namespace autopilot::lti
