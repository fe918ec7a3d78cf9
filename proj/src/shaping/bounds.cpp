#include "autopilot/shaping/bounds.hpp"

#include "autopilot/lti/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace autopilot::shaping {

using lti::Polynomial;

std::vector<double> default_bound_grid() { return lti::logspace(0.01, 1e4, 100); }

FrequencyBounds published_bounds(std::vector<double> grid) {
  const Polynomial num = Polynomial{1.0, 40.0} * Polynomial{1.0, 3000.0};
  const Polynomial den =
      Polynomial{1.0, 1e-5} * Polynomial{1.0, 100.0} * Polynomial{1.0, 200.0} * Polynomial{1.0, 1000.0};
  return {TransferFunction(num.scaled(3.0), den), TransferFunction(num.scaled(10.0), den), std::move(grid)};
}

bool BoundReport::pass() const {
  return std::all_of(points.begin(), points.end(), [](const BoundPoint& p) { return p.pass; });
}

double BoundReport::pass_fraction() const {
  if (points.empty()) return 0.0;
  const auto n = std::count_if(points.begin(), points.end(), [](const BoundPoint& p) { return p.pass; });
  return static_cast<double>(n) / static_cast<double>(points.size());
}

std::vector<BoundPoint> BoundReport::violations() const {
  std::vector<BoundPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out), [](const BoundPoint& p) { return !p.pass; });
  return out;
}

BoundReport check_bounds(const TransferFunction& loop, const FrequencyBounds& bounds) {
  if (bounds.grid.empty()) throw std::invalid_argument("bound grid is empty");
  BoundReport report;
  for (double w : bounds.grid) {
    BoundPoint p;
    p.omega = w;
    p.loop_db = lti::to_db(lti::magnitude(loop, w));
    p.low_db = lti::to_db(lti::magnitude(bounds.lower, w));
    p.high_db = lti::to_db(lti::magnitude(bounds.upper, w));
    p.violation_db = std::max({0.0, p.low_db - p.loop_db, p.loop_db - p.high_db});
    if (std::isnan(p.loop_db)) p.violation_db = std::numeric_limits<double>::infinity();
    p.pass = p.loop_db >= p.low_db && p.loop_db <= p.high_db;
    report.worst_violation_db = std::max(report.worst_violation_db, p.violation_db);
    report.points.push_back(p);
  }
  return report;
}

bool check_rolloff(const TransferFunction& loop, const TransferFunction& plant, double omega, double reduction_db) {
  const double limit = lti::magnitude(plant, omega) * lti::from_db(-reduction_db);
  return lti::magnitude(loop, omega) <= limit * (1.0 + 1e-9);
}

void write_bound_csv(std::ostream& os, const BoundReport& report) {
  os << "omega_rad_s,loop_db,low_db,high_db,pass\n";
  os.precision(10);
  for (const BoundPoint& p : report.points)
    os << p.omega << ',' << p.loop_db << ',' << p.low_db << ',' << p.high_db << ',' << (p.pass ? 1 : 0) << '\n';
}

}  // namespace autopilot::shaping
