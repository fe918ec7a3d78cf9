#include "autopilot/lti/frequency.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace autopilot::lti {

double FrequencyPoint::mag_db() const {
  if (at_pole) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(std::abs(value));
}

double FrequencyPoint::phase_deg() const {
  if (at_pole) return std::numeric_limits<double>::quiet_NaN();
  return std::arg(value) * 180.0 / std::numbers::pi;
}

namespace {

// Denominator evaluated at j*omega is considered zero relative to the size of its terms.
bool vanishes(const Polynomial& p, double omega, Complex value) {
  double terms = 0.0;
  double w = 1.0;
  for (int k = 0; k <= p.degree(); ++k) {
    terms += std::abs(p.coefficient(k)) * w;
    w *= omega;
  }
  return std::abs(value) <= 1e-13 * terms;
}

}  // namespace

std::vector<FrequencyPoint> freq_response(const TransferFunction& g, std::span<const double> omegas) {
  std::vector<FrequencyPoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    const Complex s(0.0, w);
    const Complex den = g.denominator()(s);
    FrequencyPoint pt{w, Complex(0.0), false};
    if (vanishes(g.denominator(), std::abs(w), den)) {
      pt.at_pole = true;
      pt.value = Complex(std::numeric_limits<double>::infinity(), 0.0);
    } else {
      pt.value = g.numerator()(s) / den;
    }
    out.push_back(pt);
  }
  return out;
}

double magnitude(const TransferFunction& g, double omega) {
  const double w[] = {omega};
  const auto pt = freq_response(g, w).front();
  return pt.at_pole ? std::numeric_limits<double>::infinity() : pt.magnitude();
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("logspace requires 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void write_frequency_csv(std::ostream& os, std::span<const FrequencyPoint> points) {
  os << "omega_rad_s,re,im,mag_db,phase_deg\n";
  os.precision(12);
  for (const auto& p : points) {
    os << p.omega << ',' << p.value.real() << ',' << p.value.imag() << ',' << p.mag_db() << ','
       << p.phase_deg() << '\n';
  }
}

}  // namespace autopilot::lti
