#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace autopilot::lti {

using Complex = std::complex<double>;

/// Real polynomial in the Laplace variable, coefficients stored highest degree first.
///
/// Leading zeros are stripped on construction so the leading coefficient is nonzero
/// unless the polynomial is identically zero, in which case it holds the single
/// coefficient 0 and reports degree 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coefficients);
  Polynomial(std::initializer_list<double> coefficients)
      : Polynomial(std::vector<double>(coefficients)) {}

  static Polynomial constant(double c) { return Polynomial({c}); }
  /// Monic polynomial with the given roots, times `leading`. Complex roots must
  /// appear in conjugate pairs; imaginary residue is discarded.
  static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

  [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  [[nodiscard]] double leading() const { return coeffs_.front(); }
  /// Coefficient of s^k (0 when k exceeds the degree).
  [[nodiscard]] double coefficient(int power) const;
  /// Sum of absolute coefficient values.
  [[nodiscard]] double scale() const;

  [[nodiscard]] Complex operator()(Complex s) const;
  [[nodiscard]] double operator()(double s) const;

  /// p(-s).
  [[nodiscard]] Polynomial mirrored() const;
  [[nodiscard]] Polynomial scaled(double factor) const;
  [[nodiscard]] Polynomial derivative() const;

  /// Roots via eigenvalues of the balanced companion matrix.
  [[nodiscard]] std::vector<Complex> roots() const;

  [[nodiscard]] std::string to_string(char variable = 's') const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& p) { return p.scaled(k); }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Max relative coefficient difference after aligning degrees; used by tests and the
/// cancellation logic.
double coefficient_distance(const Polynomial& a, const Polynomial& b);

}  // namespace autopilot::lti
