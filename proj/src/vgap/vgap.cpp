#include "autopilot/vgap/vgap.hpp"

#include "autopilot/lti/frequency.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace autopilot::vgap {

using lti::Polynomial;

namespace {

constexpr double kAxisTolerance = 1e-9;
constexpr double kAxisMatchTolerance = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_infinite(Complex z) { return !std::isfinite(z.real()) || !std::isfinite(z.imag()); }

/// kappa from numerator/denominator values, well defined at poles.
double chordal_from_parts(Complex n1, Complex d1, Complex n2, Complex d2) {
  const double s1 = std::sqrt(std::norm(n1) + std::norm(d1));
  const double s2 = std::sqrt(std::norm(n2) + std::norm(d2));
  if (s1 == 0.0 || s2 == 0.0) return 0.0;
  return std::min(1.0, std::abs(n1 * d2 - n2 * d1) / (s1 * s2));
}

struct Pair {
  const TransferFunction& p1;
  const TransferFunction& p2;

  [[nodiscard]] double at(double omega) const {
    const Complex s(0.0, omega);
    return chordal_from_parts(p1.numerator()(s), p1.denominator()(s), p2.numerator()(s), p2.denominator()(s));
  }
  [[nodiscard]] double at_infinity() const {
    return chordal_distance(p1.high_frequency_gain(), p2.high_frequency_gain());
  }
};

bool on_axis(const Complex& r, double tol) { return std::abs(r.real()) <= tol * std::max(1.0, std::abs(r)); }

/// Axis roots of `num` not cancelled by an axis root of `den`.
int uncancelled_axis_roots(const std::vector<Complex>& num, const std::vector<Complex>& den) {
  std::vector<Complex> den_axis;
  for (const Complex& r : den)
    if (on_axis(r, kAxisTolerance)) den_axis.push_back(r);
  std::vector<bool> used(den_axis.size(), false);
  int count = 0;
  for (const Complex& z : num) {
    if (!on_axis(z, kAxisTolerance)) continue;
    bool matched = false;
    for (std::size_t i = 0; i < den_axis.size() && !matched; ++i) {
      if (!used[i] && std::abs(z - den_axis[i]) <= kAxisMatchTolerance * std::max(1.0, std::abs(z))) {
        used[i] = true;
        matched = true;
      }
    }
    if (!matched) ++count;
  }
  return count;
}

/// Golden-section search for the maximum of kappa over [lo, hi] in log frequency.
std::pair<double, double> refine_peak(const Pair& pair, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::log(lo), b = std::log(hi);
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = pair.at(std::exp(x1)), f2 = pair.at(std::exp(x2));
  double best = std::max(f1, f2);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = pair.at(std::exp(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = pair.at(std::exp(x1));
    }
    const double next = std::max(f1, f2);
    const bool settled = std::abs(next - best) < tol;
    best = std::max(best, next);
    if (settled && (b - a) < 1e-6) break;
  }
  return f1 >= f2 ? std::pair{std::exp(x1), f1} : std::pair{std::exp(x2), f2};
}

}  // namespace

double chordal_distance(Complex p1, Complex p2) {
  const bool inf1 = is_infinite(p1), inf2 = is_infinite(p2);
  if (inf1 && inf2) return 0.0;
  if (inf1) return 1.0 / std::sqrt(1.0 + std::norm(p2));
  if (inf2) return 1.0 / std::sqrt(1.0 + std::norm(p1));
  return std::min(1.0, std::abs(p1 - p2) / (std::sqrt(1.0 + std::norm(p1)) * std::sqrt(1.0 + std::norm(p2))));
}

WindingCheck winding_check(const TransferFunction& p1, const TransferFunction& p2) {
  const TransferFunction a = p1.minreal(), b = p2.minreal();
  if (!a.is_proper() || !b.is_proper()) throw std::invalid_argument("v-gap requires proper plants");
  const Polynomial den = a.denominator().mirrored() * b.denominator();
  const Polynomial num = den + a.numerator().mirrored() * b.numerator();

  WindingCheck out;
  const auto pa = lti::poles(a), pb = lti::poles(b);
  out.rhp_poles_p1 = lti::count_rhp(pa, kAxisTolerance);
  out.rhp_poles_p2 = lti::count_rhp(pb, kAxisTolerance);
  out.axis_poles_p1 = lti::count_axis(pa, kAxisTolerance);
  // g(inf) = 0 or g identically zero puts a zero on the (extended) axis
  if (num.is_zero() || num.degree() < den.degree()) return out;
  const auto zn = num.roots(), zd = den.roots();
  if (uncancelled_axis_roots(zn, zd) > 0) return out;
  out.nonzero_on_axis = true;
  out.winding_number = lti::count_rhp(zn, kAxisTolerance) - lti::count_rhp(zd, kAxisTolerance);
  return out;
}

VgapResult vgap_metric(const TransferFunction& p1, const TransferFunction& p2, const FrequencyGrid& grid) {
  if (!(grid.lo > 0.0) || !(grid.hi > grid.lo) || grid.points_per_decade < 1)
    throw std::invalid_argument("invalid v-gap frequency grid");
  VgapResult out;
  if (!winding_check(p1, p2).ok()) return out;
  out.winding_ok = true;

  const Pair pair{p1, p2};
  const double decades = std::log10(grid.hi / grid.lo);
  const auto count = static_cast<std::size_t>(std::ceil(decades * grid.points_per_decade)) + 1;
  const std::vector<double> omegas = lti::logspace(grid.lo, grid.hi, count);
  std::vector<double> kappa(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) kappa[i] = pair.at(omegas[i]);

  out.value = pair.at(0.0);
  out.argmax_omega = 0.0;
  const double at_inf = pair.at_infinity();
  if (at_inf > out.value) {
    out.value = at_inf;
    out.argmax_omega = kInf;
  }
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (kappa[i] > out.value) {
      out.value = kappa[i];
      out.argmax_omega = omegas[i];
    }
  }

  // Refine the strongest interior local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < kappa.size(); ++i)
    if (kappa[i] >= kappa[i - 1] && kappa[i] >= kappa[i + 1] && kappa[i] > 0.0) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return kappa[x] > kappa[y]; });
  if (peaks.size() > 8) peaks.resize(8);
  for (std::size_t i : peaks) {
    const auto [w, v] = refine_peak(pair, omegas[i - 1], omegas[i + 1], grid.refine_tolerance);
    if (v > out.value) {
      out.value = v;
      out.argmax_omega = w;
    }
  }
  return out;
}

VgapMatrix::VgapMatrix(std::size_t n) : n_(n), cells_(n * n) {
  for (std::size_t i = 0; i < n; ++i) cells_[i * n + i] = VgapResult{0.0, true, 0.0};
}

void VgapMatrix::set(std::size_t i, std::size_t j, const VgapResult& r) {
  if (i >= n_ || j >= n_) throw std::out_of_range("v-gap matrix index");
  cells_[i * n_ + j] = r;
  cells_[j * n_ + i] = r;
}

VgapMatrix VgapMatrix::from_values(const std::vector<std::vector<double>>& values) {
  VgapMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != values.size()) throw std::invalid_argument("v-gap matrix must be square");
    for (std::size_t j = i + 1; j < values.size(); ++j) m.set(i, j, VgapResult{values[i][j], true, 0.0});
  }
  return m;
}

VgapMatrix vgap_matrix(std::span<const TransferFunction> plants, const FrequencyGrid& grid, unsigned threads) {
  const std::size_t n = plants.size();
  VgapMatrix m(n);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) jobs.emplace_back(i, j);
  std::vector<VgapResult> results(jobs.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        results[k] = vgap_metric(plants[jobs[k].first], plants[jobs[k].second], grid);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t k = 0; k < jobs.size(); ++k) m.set(jobs[k].first, jobs[k].second, results[k]);
  return m;
}

NominalSelection select_nominal(const VgapMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("cannot select a nominal plant from an empty set");
  bool any_valid = n == 1;
  for (std::size_t i = 0; i < n && !any_valid; ++i)
    for (std::size_t j = i + 1; j < n && !any_valid; ++j) any_valid = m.at(i, j).winding_ok;
  if (!any_valid)
    throw std::runtime_error("every plant pair fails the winding condition; partition the envelope into smaller regions");

  NominalSelection best{0, kInf};
  for (std::size_t i = 0; i < n; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, m.value(i, j));
    if (worst < best.worst_gap) best = {i, worst};
  }
  return best;
}

void write_vgap_csv(std::ostream& os, const VgapMatrix& m, std::span<const std::string> ids) {
  if (ids.size() != m.size()) throw std::invalid_argument("id count does not match v-gap matrix size");
  os << "id";
  for (const auto& id : ids) os << ',' << id;
  os << '\n';
  os.precision(10);
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << ids[i];
    for (std::size_t j = 0; j < m.size(); ++j) os << ',' << m.value(i, j);
    os << '\n';
  }
}

}  // namespace autopilot::vgap
