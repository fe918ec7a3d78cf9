#pragma once

#include "autopilot/lti/state_space.hpp"

#include <span>
#include <vector>

namespace autopilot::synthesis {

/// Numerator degree m and monic denominator degree n of a fixed-structure controller.
struct ControllerStructure {
  int numerator_degree = 0;
  int denominator_degree = 1;

  [[nodiscard]] std::size_t parameter_count() const {
    return static_cast<std::size_t>(numerator_degree + 1 + denominator_degree);
  }
};

/// K(s) = (a_m s^m + ... + a_0) / (s^n + b_{n-1} s^{n-1} + ... + b_0), m <= n.
class FixedStructureController {
 public:
  FixedStructureController(std::vector<double> numerator, std::vector<double> denominator_tail);
  /// Splits a flat vector [a_m..a_0, b_{n-1}..b_0] according to `structure`.
  static FixedStructureController from_parameters(std::span<const double> params, const ControllerStructure& structure);

  [[nodiscard]] const std::vector<double>& numerator() const { return numerator_; }
  [[nodiscard]] const std::vector<double>& denominator_tail() const { return denominator_tail_; }
  [[nodiscard]] ControllerStructure structure() const;
  [[nodiscard]] std::vector<double> parameters() const;

  [[nodiscard]] lti::TransferFunction transfer_function() const;
  [[nodiscard]] lti::StateSpace state_space() const { return lti::balance(lti::tf_to_ss(transfer_function())); }

 private:
  std::vector<double> numerator_;
  std::vector<double> denominator_tail_;
};

}  // namespace autopilot::synthesis
