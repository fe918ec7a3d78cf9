#include "autopilot/lti/state_space.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace autopilot::lti {

StateSpace::StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const auto n = a_.rows();
  if (a_.cols() != n) throw std::invalid_argument("state matrix A must be square");
  if (b_.rows() != n) throw std::invalid_argument("B must have as many rows as A");
  if (c_.cols() != n) throw std::invalid_argument("C must have as many columns as A");
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols()) throw std::invalid_argument("D must be outputs x inputs");
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite())
    throw std::invalid_argument("state-space matrices must be finite");
}

StateSpace StateSpace::gain(const Matrix& d) {
  return {Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d};
}

ComplexMatrix StateSpace::evaluate(std::complex<double> s) const {
  ComplexMatrix out = d_.cast<std::complex<double>>();
  if (states() == 0) return out;
  ComplexMatrix resolvent = -a_.cast<std::complex<double>>();
  resolvent.diagonal().array() += s;
  const ComplexMatrix x = resolvent.partialPivLu().solve(b_.cast<std::complex<double>>());
  out += c_.cast<std::complex<double>>() * x;
  return out;
}

StateSpace tf_to_ss(const TransferFunction& g) {
  if (!g.is_proper()) throw std::invalid_argument("cannot realize improper transfer function " + g.to_string());
  const Polynomial& den = g.denominator();  // monic
  const int n = den.degree();
  const double d = n == g.numerator().degree() ? g.numerator().leading() : (n == 0 ? g.numerator().coefficient(0) : 0.0);
  if (n == 0) return StateSpace::gain(d);
  // strictly proper remainder num - d*den
  const Polynomial rem = g.numerator() - den.scaled(d);
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, 1);
  Matrix c = Matrix::Zero(1, n);
  for (int j = 0; j < n; ++j) a(0, j) = -den.coefficient(n - 1 - j);
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  b(0, 0) = 1.0;
  for (int j = 0; j < n; ++j) c(0, j) = rem.coefficient(n - 1 - j);
  return {a, b, c, Matrix::Constant(1, 1, d)};
}

std::vector<Complex> eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> es(balance_matrix(a).matrix, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
  std::vector<Complex> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

double spectral_abscissa(const Matrix& a) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Complex& l : eigenvalues(a)) worst = std::max(worst, l.real());
  return worst;
}

bool is_hurwitz(const Matrix& a, double threshold) {
  return a.rows() == 0 || spectral_abscissa(a) < -threshold;
}

namespace {

Polynomial characteristic_polynomial(const Matrix& a) {
  const auto ev = eigenvalues(a);
  return Polynomial::from_roots(ev);
}

}  // namespace

TransferFunction ss_to_tf(const StateSpace& sys) {
  if (!sys.is_siso()) throw std::invalid_argument("ss_to_tf requires a single-input single-output system");
  const double d = sys.D()(0, 0);
  if (sys.states() == 0) return TransferFunction::gain(d);
  const Polynomial chi = characteristic_polynomial(sys.A());
  const Polynomial chi_bc = characteristic_polynomial(sys.A() - sys.B() * sys.C());
  const Polynomial num = chi.scaled(d) + chi_bc - chi;
  // Leading coefficients at round-off level of the subtraction are structural zeros.
  int top = num.degree();
  constexpr double kRoundoff = 1e3 * std::numeric_limits<double>::epsilon();
  while (top > 0) {
    const double noise = kRoundoff * ((1.0 + std::abs(d)) * std::abs(chi.coefficient(top)) +
                                      std::abs(chi_bc.coefficient(top)));
    if (std::abs(num.coefficient(top)) > noise) break;
    --top;
  }
  std::vector<double> c(static_cast<std::size_t>(top + 1));
  for (int k = 0; k <= top; ++k) c[static_cast<std::size_t>(top - k)] = num.coefficient(k);
  return TransferFunction(Polynomial(std::move(c)), chi).minreal();
}

StateSpace series(const StateSpace& first, const StateSpace& second) {
  if (first.outputs() != second.inputs()) throw std::invalid_argument("series: dimension mismatch");
  const auto n1 = first.states();
  const auto n2 = second.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = first.A();
  a.bottomLeftCorner(n2, n1) = second.B() * first.C();
  a.bottomRightCorner(n2, n2) = second.A();
  Matrix b(n1 + n2, first.inputs());
  b << first.B(), second.B() * first.D();
  Matrix c(second.outputs(), n1 + n2);
  c << second.D() * first.C(), second.C();
  return {a, b, c, second.D() * first.D()};
}

StateSpace scale(const StateSpace& sys, double k) {
  return {sys.A(), sys.B(), sys.C() * k, sys.D() * k};
}

StateSpace append(const StateSpace& s1, const StateSpace& s2) {
  const auto n1 = s1.states(), n2 = s2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = s1.A();
  a.bottomRightCorner(n2, n2) = s2.A();
  Matrix b = Matrix::Zero(n1 + n2, s1.inputs() + s2.inputs());
  b.topLeftCorner(n1, s1.inputs()) = s1.B();
  b.bottomRightCorner(n2, s2.inputs()) = s2.B();
  Matrix c = Matrix::Zero(s1.outputs() + s2.outputs(), n1 + n2);
  c.topLeftCorner(s1.outputs(), n1) = s1.C();
  c.bottomRightCorner(s2.outputs(), n2) = s2.C();
  Matrix d = Matrix::Zero(s1.outputs() + s2.outputs(), s1.inputs() + s2.inputs());
  d.topLeftCorner(s1.outputs(), s1.inputs()) = s1.D();
  d.bottomRightCorner(s2.outputs(), s2.inputs()) = s2.D();
  return {a, b, c, d};
}

BalancedMatrix balance_matrix(const Matrix& input) {
  BalancedMatrix out{input, Vector::Ones(input.rows())};
  Matrix& a = out.matrix;
  const auto n = a.rows();
  if (n < 2) return out;
  constexpr double radix = 2.0;
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / radix) {
        c *= radix;
        r /= radix;
        f *= radix;
      }
      while (c >= r * radix) {
        c /= radix;
        r *= radix;
        f /= radix;
      }
      if ((c + r) < 0.95 * s) {
        converged = false;
        out.scaling(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return out;
}

StateSpace balance(const StateSpace& sys) {
  if (sys.states() == 0) return sys;
  const BalancedMatrix bal = balance_matrix(sys.A());
  const Vector& t = bal.scaling;
  Matrix b = t.cwiseInverse().asDiagonal() * sys.B();
  Matrix c = sys.C() * t.asDiagonal();
  return {bal.matrix, b, c, sys.D()};
}

}  // namespace autopilot::lti
