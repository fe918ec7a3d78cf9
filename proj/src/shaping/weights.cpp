#include "autopilot/shaping/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace autopilot::shaping {

using lti::Polynomial;

void WeightParams::validate() const {
  auto require = [](bool ok, const char* name, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("weight parameter ") + name + " " + what);
  };
  require(std::isfinite(K1) && K1 != 0.0, "K1", "must be finite and nonzero");
  require(std::isfinite(K2) && K2 != 0.0, "K2", "must be finite and nonzero");
  require(std::isfinite(alpha1) && alpha1 > 0.0, "alpha1", "must be positive");
  require(std::isfinite(alpha2) && alpha2 > 0.0, "alpha2", "must be positive");
  require(std::isfinite(beta1) && beta1 > 0.0, "beta1", "must be positive");
  require(std::isfinite(beta2) && beta2 > 0.0, "beta2", "must be positive");
}

Weights make_weights(const WeightParams& p) {
  p.validate();
  auto lead_lag = [](double k, double a, double b) {
    if (a == b) return TransferFunction::gain(k);
    return TransferFunction(Polynomial{k, k * a}, Polynomial{1.0, b}).minreal();
  };
  return {lead_lag(p.K1, p.alpha1, p.beta1), lead_lag(p.K2, p.alpha2, p.beta2)};
}

ShapedPlant shape(const TransferFunction& plant, const TransferFunction& w1, const TransferFunction& w2) {
  return {plant, w1, w2, series(w2, series(plant, w1))};
}

}  // namespace autopilot::shaping
