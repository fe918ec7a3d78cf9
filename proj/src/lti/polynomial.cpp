#include "autopilot/lti/polynomial.hpp"

#include "autopilot/lti/state_space.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace autopilot::lti {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
  }
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  coeffs_.erase(coeffs_.begin(), first);
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
  std::vector<Complex> c{Complex(1.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= c[i] * r;
    }
    c = std::move(next);
  }
  std::vector<double> real(c.size());
  std::transform(c.begin(), c.end(), real.begin(),
                 [leading](const Complex& z) { return leading * z.real(); });
  return Polynomial(std::move(real));
}

double Polynomial::coefficient(int power) const {
  const int d = degree();
  if (power < 0 || power > d) return 0.0;
  return coeffs_[static_cast<std::size_t>(d - power)];
}

double Polynomial::scale() const {
  double s = 0.0;
  for (double c : coeffs_) s += std::abs(c);
  return s;
}

Complex Polynomial::operator()(Complex s) const {
  Complex acc(0.0);
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

Polynomial Polynomial::mirrored() const {
  std::vector<double> c = coeffs_;
  const int d = degree();
  for (int k = 0; k <= d; ++k) {
    // coefficient of s^k sits at index d-k
    if (k % 2 == 1) c[static_cast<std::size_t>(d - k)] = -c[static_cast<std::size_t>(d - k)];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= factor;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::derivative() const {
  const int d = degree();
  if (d == 0) return Polynomial();
  std::vector<double> c(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)] * (d - i);
  return Polynomial(std::move(c));
}

std::vector<Complex> Polynomial::roots() const {
  if (is_zero()) throw std::domain_error("roots of the zero polynomial are undefined");
  std::vector<double> c = coeffs_;
  std::vector<Complex> out;
  while (c.size() > 1 && c.back() == 0.0) {
    out.emplace_back(0.0, 0.0);
    c.pop_back();
  }
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return out;
  if (n == 1) {
    out.emplace_back(-c[1] / c[0], 0.0);
    return out;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -c[static_cast<std::size_t>(j + 1)] / c[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  companion = balance_matrix(companion).matrix;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue iteration failed");
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  // Conjugate pairs exactly symmetric, tiny imaginary parts dropped from real roots.
  for (Complex& r : out) {
    if (std::abs(r.imag()) <= 1e-14 * std::max(1.0, std::abs(r))) r = Complex(r.real(), 0.0);
  }
  return out;
}

std::string Polynomial::to_string(char variable) const {
  std::ostringstream os;
  os.precision(10);
  const int d = degree();
  bool first = true;
  for (int i = 0; i <= d; ++i) {
    const double c = coeffs_[static_cast<std::size_t>(i)];
    const int power = d - i;
    if (c == 0.0 && !(d == 0)) continue;
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1.0 || power == 0) os << mag;
    if (power >= 1) os << variable;
    if (power >= 2) os << "^" << power;
    first = false;
  }
  return os.str();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const int d = std::max(a.degree(), b.degree());
  std::vector<double> c(static_cast<std::size_t>(d + 1), 0.0);
  for (int k = 0; k <= d; ++k) c[static_cast<std::size_t>(d - k)] = a.coefficient(k) + b.coefficient(k);
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  std::vector<double> c(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) c[i + j] += x[i] * y[j];
  return Polynomial(std::move(c));
}

double coefficient_distance(const Polynomial& a, const Polynomial& b) {
  const int d = std::max(a.degree(), b.degree());
  const double ref = std::max({a.scale(), b.scale(), 1e-300});
  double worst = 0.0;
  for (int k = 0; k <= d; ++k) worst = std::max(worst, std::abs(a.coefficient(k) - b.coefficient(k)));
  return worst / ref;
}

}  // namespace autopilot::lti
