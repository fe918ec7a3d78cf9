#pragma once

#include "autopilot/lti/transfer_function.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace autopilot::vgap {

using lti::Complex;
using lti::TransferFunction;

/// Chordal distance on the Riemann sphere. Any non-finite argument is the point at infinity.
double chordal_distance(Complex p1, Complex p2);

struct FrequencyGrid {
  double lo = 1e-4;  ///< rad/s
  double hi = 1e6;
  int points_per_decade = 400;
  double refine_tolerance = 1e-6;
};

struct VgapResult {
  double value = 1.0;
  bool winding_ok = false;
  double argmax_omega = 0.0;  ///< rad/s; +inf when the supremum is at infinite frequency
};

/// Winding data of 1 + p1(-s) p2(s) along the imaginary axis (indented to the right
/// around imaginary-axis poles).
struct WindingCheck {
  bool nonzero_on_axis = false;
  int winding_number = 0;  ///< RHP zeros minus RHP poles
  int rhp_poles_p1 = 0;
  int rhp_poles_p2 = 0;
  int axis_poles_p1 = 0;
  [[nodiscard]] bool ok() const {
    return nonzero_on_axis && winding_number + rhp_poles_p2 - rhp_poles_p1 - axis_poles_p1 == 0;
  }
};

WindingCheck winding_check(const TransferFunction& p1, const TransferFunction& p2);

VgapResult vgap_metric(const TransferFunction& p1, const TransferFunction& p2, const FrequencyGrid& grid = {});

class VgapMatrix {
 public:
  explicit VgapMatrix(std::size_t n);
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] const VgapResult& at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  [[nodiscard]] double value(std::size_t i, std::size_t j) const { return at(i, j).value; }
  /// Sets (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const VgapResult& r);
  static VgapMatrix from_values(const std::vector<std::vector<double>>& values);

 private:
  std::size_t n_;
  std::vector<VgapResult> cells_;
};

/// Pairwise gaps, computed on up to `threads` workers (0 = hardware concurrency).
VgapMatrix vgap_matrix(std::span<const TransferFunction> plants, const FrequencyGrid& grid = {},
                       unsigned threads = 0);

struct NominalSelection {
  std::size_t index = 0;
  double worst_gap = 0.0;  ///< min over i of max over j of the gap
};

/// Min-max centre, ties to the lowest index.
NominalSelection select_nominal(const VgapMatrix& m);

/// Rows/columns labelled by `ids`.
void write_vgap_csv(std::ostream& os, const VgapMatrix& m, std::span<const std::string> ids);

}  // namespace autopilot::vgap
