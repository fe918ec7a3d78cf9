#pragma once

#include "autopilot/lti/polynomial.hpp"

#include <string>
#include <vector>

namespace autopilot::lti {

/// Pole/zero pairs closer than this (relative to max(1,|p|)) are cancelled.
inline constexpr double kCancellationTolerance = 1e-7;

/// SISO rational transfer function num(s)/den(s).
///
/// Canonical form: denominator monic. A zero numerator is normalised to 0/1.
class TransferFunction {
 public:
  TransferFunction() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
  TransferFunction(Polynomial numerator, Polynomial denominator);

  static TransferFunction gain(double k) { return {Polynomial::constant(k), Polynomial::constant(1.0)}; }
  /// k * prod(s - z) / prod(s - p)
  static TransferFunction from_zpk(std::span<const Complex> zeros, std::span<const Complex> poles, double k);

  [[nodiscard]] const Polynomial& numerator() const { return num_; }
  [[nodiscard]] const Polynomial& denominator() const { return den_; }
  [[nodiscard]] int order() const { return den_.degree(); }
  [[nodiscard]] bool is_proper() const { return num_.degree() <= den_.degree() || num_.is_zero(); }
  [[nodiscard]] bool is_strictly_proper() const { return num_.is_zero() || num_.degree() < den_.degree(); }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

  [[nodiscard]] Complex operator()(Complex s) const { return num_(s) / den_(s); }
  [[nodiscard]] Complex at_frequency(double omega) const { return (*this)(Complex(0.0, omega)); }
  /// Value at s = 0; infinite when the denominator vanishes there.
  [[nodiscard]] double dc_gain() const;
  /// Limit as |s| -> infinity (finite only for proper systems).
  [[nodiscard]] double high_frequency_gain() const;

  /// Cancels pole/zero pairs within `tolerance`.
  [[nodiscard]] TransferFunction minreal(double tolerance = kCancellationTolerance) const;
  /// g(-s)
  [[nodiscard]] TransferFunction mirrored() const { return {num_.mirrored(), den_.mirrored()}; }

  [[nodiscard]] std::string to_string() const;

 private:
  Polynomial num_;
  Polynomial den_;
};

TransferFunction series(const TransferFunction& g1, const TransferFunction& g2);
TransferFunction parallel(const TransferFunction& g1, const TransferFunction& g2);
TransferFunction scale(const TransferFunction& g, double k);
/// g / (1 + g), negative unity feedback.
TransferFunction feedback_unity(const TransferFunction& g);
/// g / (1 + g h), negative feedback through h.
TransferFunction feedback(const TransferFunction& g, const TransferFunction& h);

std::vector<Complex> poles(const TransferFunction& g);
std::vector<Complex> zeros(const TransferFunction& g);
/// All poles strictly in the open left half plane.
bool is_stable(const TransferFunction& g);
/// Stable plant with no zeros in the closed right half plane.
bool is_minimum_phase(const TransferFunction& g);
/// Number of poles with positive real part (and, separately, on the axis).
int count_rhp(std::span<const Complex> roots, double axis_tolerance = 1e-9);
int count_axis(std::span<const Complex> roots, double axis_tolerance = 1e-9);

}  // namespace autopilot::lti
