#include "autopilot/synthesis/fixed_structure.hpp"

#include <cmath>
#include <stdexcept>

namespace autopilot::synthesis {

FixedStructureController::FixedStructureController(std::vector<double> numerator,
                                                   std::vector<double> denominator_tail)
    : numerator_(std::move(numerator)), denominator_tail_(std::move(denominator_tail)) {
  if (numerator_.empty()) throw std::invalid_argument("controller numerator needs at least a_0");
  if (numerator_.size() > denominator_tail_.size() + 1)
    throw std::invalid_argument("fixed-structure controller must be proper (m <= n)");
  for (double v : numerator_)
    if (!std::isfinite(v)) throw std::invalid_argument("controller coefficient is not finite");
  for (double v : denominator_tail_)
    if (!std::isfinite(v)) throw std::invalid_argument("controller coefficient is not finite");
}

FixedStructureController FixedStructureController::from_parameters(std::span<const double> params,
                                                                   const ControllerStructure& structure) {
  if (params.size() != structure.parameter_count())
    throw std::invalid_argument("controller parameter vector has length " + std::to_string(params.size()) +
                                ", structure needs " + std::to_string(structure.parameter_count()));
  const auto m1 = static_cast<std::size_t>(structure.numerator_degree + 1);
  return {std::vector<double>(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(m1)),
          std::vector<double>(params.begin() + static_cast<std::ptrdiff_t>(m1), params.end())};
}

ControllerStructure FixedStructureController::structure() const {
  return {static_cast<int>(numerator_.size()) - 1, static_cast<int>(denominator_tail_.size())};
}

std::vector<double> FixedStructureController::parameters() const {
  std::vector<double> out = numerator_;
  out.insert(out.end(), denominator_tail_.begin(), denominator_tail_.end());
  return out;
}

lti::TransferFunction FixedStructureController::transfer_function() const {
  std::vector<double> den{1.0};
  den.insert(den.end(), denominator_tail_.begin(), denominator_tail_.end());
  return {lti::Polynomial(numerator_), lti::Polynomial(std::move(den))};
}

}  // namespace autopilot::synthesis
