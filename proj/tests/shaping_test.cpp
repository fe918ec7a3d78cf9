#include "autopilot/lti/frequency.hpp"
#include "autopilot/missile/missile.hpp"
#include "autopilot/shaping/bounds.hpp"
#include "autopilot/shaping/fit.hpp"
#include "autopilot/shaping/weights.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace autopilot;
using namespace autopilot::shaping;
using lti::Polynomial;
using test_support::rel_err;

namespace {

std::vector<MagnitudeSample> sample(const TransferFunction& g, const std::vector<double>& grid) {
  std::vector<MagnitudeSample> out;
  for (double w : grid) out.push_back({w, lti::magnitude(g, w)});
  return out;
}

bool strictly_lhp(const std::vector<lti::Complex>& roots) {
  return std::all_of(roots.begin(), roots.end(), [](const lti::Complex& r) { return r.real() < 0.0; });
}

double max_db_error(const TransferFunction& a, const TransferFunction& b, const std::vector<double>& grid) {
  double worst = 0.0;
  for (double w : grid)
    worst = std::max(worst, std::abs(lti::to_db(lti::magnitude(a, w)) - lti::to_db(lti::magnitude(b, w))));
  return worst;
}

}  // namespace

TEST_CASE("weight examples") {
  const Weights unit = make_weights({});
  CHECK(unit.w1.order() == 0);
  CHECK(unit.w1.dc_gain() == 1.0);
  CHECK(unit.w2.dc_gain() == 1.0);

  WeightParams p;
  p.K1 = 1.0;
  p.alpha1 = p.beta1 = 7.0;
  p.K2 = 3.0;
  p.alpha2 = 40.0;
  p.beta2 = 100.0;
  const Weights w = make_weights(p);
  CHECK(w.w1.order() == 0);
  CHECK(w.w1.dc_gain() == 1.0);
  CHECK(lti::magnitude(w.w2, 0.0) == doctest::Approx(1.2));
  CHECK(w.w2.numerator().coefficients() == std::vector<double>{3.0, 120.0});

  for (auto mutate : {+[](WeightParams& q) { q.beta1 = 0.0; }, +[](WeightParams& q) { q.alpha2 = -1.0; },
                      +[](WeightParams& q) { q.K1 = 0.0; }, +[](WeightParams& q) { q.beta2 = std::nan(""); }}) {
    WeightParams bad;
    mutate(bad);
    CHECK_THROWS_AS(make_weights(bad), std::invalid_argument);
  }
  try {
    WeightParams bad;
    bad.beta2 = -2.0;
    make_weights(bad);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("beta2") != std::string::npos);
  }
}

TEST_CASE("weights are stable and minimum phase") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    WeightParams p{std::pow(10.0, test_support::uniform(rng, -3, 3)) * (trial % 2 ? -1 : 1),
                   std::pow(10.0, test_support::uniform(rng, -3, 3)), std::pow(10.0, test_support::uniform(rng, -3, 3)),
                   std::pow(10.0, test_support::uniform(rng, -3, 3)), std::pow(10.0, test_support::uniform(rng, -3, 3)),
                   std::pow(10.0, test_support::uniform(rng, -3, 3))};
    const Weights w = make_weights(p);
    for (const auto* g : {&w.w1, &w.w2}) {
      CHECK(strictly_lhp(lti::poles(*g)));
      CHECK(strictly_lhp(lti::zeros(*g)));
    }
  }
}

TEST_CASE("shape examples and pointwise product") {
  const TransferFunction lag({1.0}, {1.0, 1.0});
  const TransferFunction one = TransferFunction::gain(1.0);
  const ShapedPlant same = shape(lag, one, one);
  CHECK(same.shaped.numerator().coefficients() == lag.numerator().coefficients());
  CHECK(same.shaped.denominator().coefficients() == lag.denominator().coefficients());
  const ShapedPlant six = shape(lag, TransferFunction::gain(2.0), TransferFunction::gain(3.0));
  CHECK(six.shaped.numerator().coefficients() == std::vector<double>{6.0});
  CHECK(six.shaped.denominator().coefficients() == std::vector<double>{1.0, 1.0});

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = test_support::random_stable_tf(rng, 3);
    const auto w1 = test_support::random_stable_tf(rng, 1);
    const auto w2 = test_support::random_stable_tf(rng, 2);
    const ShapedPlant s = shape(p, w1, w2);
    for (double w : lti::logspace(1e-2, 1e3, 50))
      CHECK(rel_err(s.shaped.at_frequency(w), w2.at_frequency(w) * p.at_frequency(w) * w1.at_frequency(w)) < 1e-10);
  }
}

TEST_CASE("published bounds") {
  const FrequencyBounds b = published_bounds();
  CHECK(b.grid.size() == 100);
  CHECK(b.grid.front() == doctest::Approx(0.01));
  CHECK(b.grid.back() == doctest::Approx(1e4));
  for (double w : lti::logspace(1e-6, 1e6, 200))
    CHECK(lti::magnitude(b.upper, w) / lti::magnitude(b.lower, w) == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  CHECK(lti::magnitude(b.lower, 1e-7) == doctest::Approx(1800.0).epsilon(1e-4));
  CHECK(lti::to_db(lti::magnitude(b.lower, 1e-7)) == doctest::Approx(65.1).epsilon(1e-3));
  for (const auto* g : {&b.lower, &b.upper}) {
    CHECK(g->denominator().degree() - g->numerator().degree() == 2);
    CHECK(g->high_frequency_gain() == 0.0);
  }
}

TEST_CASE("bound checks") {
  const FrequencyBounds b = published_bounds();
  SUBCASE("geometric mean passes") {
    std::vector<BoundPoint> pts;
    // a loop between the bounds everywhere: sqrt(3*10) times the shared shape
    const TransferFunction mid(b.lower.numerator().scaled(std::sqrt(10.0 / 3.0)), b.lower.denominator());
    const BoundReport r = check_bounds(mid, b);
    CHECK(r.pass());
    CHECK(r.pass_fraction() == 1.0);
    CHECK(r.violations().empty());
    CHECK(r.worst_violation_db == 0.0);
  }
  SUBCASE("twice the upper bound fails everywhere") {
    const BoundReport r = check_bounds(scale(b.upper, 2.0), b);
    CHECK_FALSE(r.pass());
    CHECK(r.pass_fraction() == 0.0);
    CHECK(r.violations().size() == b.grid.size());
    CHECK(r.worst_violation_db == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
  }
  SUBCASE("csv") {
    std::ostringstream os;
    write_bound_csv(os, check_bounds(b.lower, b));
    const std::string text = os.str();
    CHECK(text.rfind("omega_rad_s,loop_db,low_db,high_db,pass\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 101);
  }
}

TEST_CASE("bound checks are monotone under upward scaling") {
  const FrequencyBounds b = published_bounds();
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto loop = scale(test_support::random_stable_tf(rng, 3), std::pow(10.0, test_support::uniform(rng, -3, 2)));
    const double k = std::pow(10.0, test_support::uniform(rng, 0.01, 2));
    const BoundReport r1 = check_bounds(loop, b), r2 = check_bounds(scale(loop, k), b);
    for (std::size_t i = 0; i < r1.points.size(); ++i) {
      const bool above1 = r1.points[i].loop_db > r1.points[i].high_db;
      if (above1) CHECK_FALSE(r2.points[i].pass);
    }
  }
}

TEST_CASE("roll-off check") {
  const TransferFunction g = missile::reference_plant();
  CHECK_FALSE(check_rolloff(g, g, 300.0, 25.0));
  CHECK(check_rolloff(scale(g, std::pow(10.0, -25.0 / 20.0)), g, 300.0, 25.0));
  CHECK_FALSE(check_rolloff(scale(g, std::pow(10.0, -24.9 / 20.0)), g, 300.0, 25.0));
  CHECK(check_rolloff(TransferFunction::gain(0.0), g, 300.0, 25.0));
}

TEST_CASE("minimum-phase fit examples") {
  const std::vector<double> grid = lti::logspace(0.1, 1e4, 100);
  SUBCASE("constant") {
    const FitResult r = fit_minimum_phase(sample(TransferFunction::gain(1.0), grid), 0);
    CHECK(r.fit.order() == 0);
    CHECK(r.fit.dc_gain() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.rms_db < 1e-9);
  }
  SUBCASE("first-order round trip") {
    const TransferFunction src({1.0, 40.0}, {1.0, 100.0});
    const FitResult r = fit_minimum_phase(sample(src, grid), 1);
    CHECK(r.rms_db < 0.1);
    CHECK(lti::zeros(r.fit).at(0).real() == doctest::Approx(-40.0).epsilon(1e-3));
    CHECK(lti::poles(r.fit).at(0).real() == doctest::Approx(-100.0).epsilon(1e-3));
  }
  SUBCASE("non-minimum-phase source is reflected") {
    const TransferFunction nmp({1.0, -40.0}, {1.0, 100.0});
    const FitResult r = fit_minimum_phase(sample(nmp, grid), 1);
    const TransferFunction reflected({1.0, 40.0}, {1.0, 100.0});
    CHECK(r.rms_db < 0.1);
    CHECK(max_db_error(r.fit, reflected, grid) < 0.01);
    CHECK(lti::is_minimum_phase(r.fit));
  }
  SUBCASE("second order resonance") {
    const TransferFunction src({2.0, 10.0, 50.0}, {1.0, 3.0, 400.0});
    const FitResult r = fit_minimum_phase(sample(src, grid), 2);
    CHECK(r.rms_db < 0.1);
    CHECK(max_db_error(r.fit, src, grid) < 0.1);
  }
  SUBCASE("errors") {
    const auto few = sample(TransferFunction::gain(1.0), {1.0, 2.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(fit_minimum_phase(few, 2), FitError);
    try {
      fit_minimum_phase(few, 3);
    } catch (const FitError& e) {
      CHECK(std::string(e.what()).find("lower order") != std::string::npos);
    }
    CHECK_NOTHROW(fit_minimum_phase(few, 1));
    std::vector<MagnitudeSample> bad{{1.0, 0.0}, {2.0, 1.0}, {3.0, 1.0}};
    CHECK_THROWS_AS(fit_minimum_phase(bad, 1), std::invalid_argument);
  }
}

TEST_CASE("fits are always stable and minimum phase") {
  std::mt19937_64 rng(17);
  const std::vector<double> grid = lti::logspace(1e-2, 1e4, 100);
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = test_support::random_stable_tf(rng, 1 + trial % 3);
    const int order = 1 + trial % 4;
    const FitResult r = fit_minimum_phase(sample(src, grid), order);
    INFO("trial " << trial << " source " << src.to_string() << " fit " << r.fit.to_string());
    CHECK(strictly_lhp(lti::poles(r.fit)));
    CHECK(strictly_lhp(lti::zeros(r.fit)));
    CHECK(std::isfinite(r.rms_db));
  }
}

TEST_CASE("centering fit on the reference plant") {
  const TransferFunction g = missile::reference_plant();
  const FrequencyBounds b = published_bounds();
  const auto target = centering_target(g, b);
  REQUIRE(target.size() == 100);
  // target times the plant sits on the geometric mean of the bounds
  for (const auto& t : target)
    CHECK(t.magnitude * lti::magnitude(g, t.omega) ==
          doctest::Approx(std::sqrt(lti::magnitude(b.lower, t.omega) * lti::magnitude(b.upper, t.omega))));
  const FitResult r = fit_minimum_phase(target, 3);
  const BoundReport report = check_bounds(shape(g, TransferFunction::gain(1.0), r.fit).shaped, b);
  CHECK(report.pass());
  CHECK(lti::is_minimum_phase(r.fit));
}
