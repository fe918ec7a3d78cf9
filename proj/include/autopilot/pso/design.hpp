#pragma once

#include "autopilot/pso/swarm.hpp"
#include "autopilot/shaping/bounds.hpp"
#include "autopilot/shaping/weights.hpp"
#include "autopilot/synthesis/fixed_structure.hpp"
#include "autopilot/synthesis/loop_shaping.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace autopilot::pso {

using lti::TransferFunction;
using shaping::FrequencyBounds;
using synthesis::ControllerStructure;

enum class ViolationMeasure { Worst, Sum };

struct PenaltyWeights {
  double per_db = 0.05;  ///< per dB of bound violation
  double rolloff = 0.5;  ///< flat, when the roll-off check fails
  ViolationMeasure measure = ViolationMeasure::Worst;  ///< worst grid point, or summed over the grid
};

struct RolloffRequirement {
  double omega = 300.0;        ///< rad/s
  double reduction_db = 25.0;  ///< required drop relative to the bare plant
};

struct DesignCost {
  double margin = 0.0;
  double penalty = 0.0;
  double total = 0.0;  ///< -margin + penalty
  double worst_violation_db = 0.0;
  bool rolloff_ok = false;
};

struct CostContext {
  TransferFunction plant;
  FrequencyBounds bounds;
  ControllerStructure structure;
  PenaltyWeights penalty;
  RolloffRequirement rolloff;
};

/// Weight parameters first, then the controller: [K1, alpha1, beta1, K2, alpha2, beta2, a_m..a_0, b_{n-1}..b_0].
std::size_t parameter_count(const ControllerStructure& structure);
shaping::WeightParams decode_weights(std::span<const double> params);

/// Penalty of a shaped loop against the bounds and roll-off requirement.
DesignCost loop_cost(const TransferFunction& shaped, double margin, const CostContext& ctx);
DesignCost margin_cost(std::span<const double> params, const CostContext& ctx);

enum class DesignMode { Pso, Fit100 };

struct DesignConfig {
  ControllerStructure structure;
  PenaltyWeights penalty;
  RolloffRequirement rolloff;
  SwarmConfig swarm;  ///< bounds left empty are filled from the ranges below
  // PSO search ranges (log10 for weights)
  Interval log10_gain{-6.0, 3.0};
  Interval log10_corner{-3.0, 4.0};
  Interval controller_coefficient{-10.0, 10.0};
  // fit100 workflow
  double gamma_factor = synthesis::kDefaultGammaFactor;
  int fit_order = 2;
};

struct DesignResult {
  DesignMode mode = DesignMode::Fit100;
  TransferFunction w1, w2, shaped;
  TransferFunction controller;        ///< acts on the shaped plant
  TransferFunction final_controller;  ///< w1 * controller * w2, acts on the plant
  std::optional<shaping::WeightParams> weights;
  std::optional<synthesis::FixedStructureController> fixed;
  double margin = 0.0;
  double b_opt = 0.0;
  double gamma = 0.0;  ///< fit100 only
  double fit_rms_db = 0.0;
  shaping::BoundReport bound_report;
  DesignCost cost;
  bool stabilizing = false;
  std::string flag;  ///< empty, or why the design is unusable
  SwarmResult swarm;
  std::vector<DesignCost> history_costs;  ///< per swarm history entry
};

DesignResult design_pso(const TransferFunction& plant, const FrequencyBounds& bounds, const DesignConfig& config);
DesignResult design_fit100(const TransferFunction& plant, const FrequencyBounds& bounds, const DesignConfig& config);
DesignResult design(DesignMode mode, const TransferFunction& plant, const FrequencyBounds& bounds,
                    const DesignConfig& config);

/// Columns iteration, gbest_cost, gbest_margin, worst_violation_db.
void write_history_csv(std::ostream& os, const DesignResult& result);

}  // namespace autopilot::pso
