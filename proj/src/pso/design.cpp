#include "autopilot/pso/design.hpp"

#include "autopilot/lti/state_space.hpp"
#include "autopilot/shaping/fit.hpp"
#include "autopilot/synthesis/loop_shaping.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace autopilot::pso {

namespace {

constexpr std::size_t kWeightParams = 6;

lti::StateSpace realize(const TransferFunction& g) { return lti::balance(lti::tf_to_ss(g)); }

/// Search coordinates: log10 of every weight parameter, controller coefficients as is.
std::vector<double> to_physical(std::span<const double> x) {
  std::vector<double> p(x.begin(), x.end());
  for (std::size_t i = 0; i < kWeightParams; ++i) p[i] = std::pow(10.0, x[i]);
  return p;
}

void finish(DesignResult& r, const TransferFunction& plant) {
  r.final_controller = series(series(r.w1, r.controller), r.w2);
  r.stabilizing = synthesis::internally_stable(realize(plant), realize(r.final_controller));
  if (r.margin <= 0.0 || !r.stabilizing) r.flag = "no stabilizing candidate found";
}

}  // namespace

std::size_t parameter_count(const ControllerStructure& structure) {
  return kWeightParams + structure.parameter_count();
}

shaping::WeightParams decode_weights(std::span<const double> params) {
  if (params.size() < kWeightParams) throw std::invalid_argument("parameter vector too short for the weights");
  shaping::WeightParams w{params[0], params[1], params[2], params[3], params[4], params[5]};
  w.validate();
  return w;
}

DesignCost loop_cost(const TransferFunction& shaped, double margin, const CostContext& ctx) {
  DesignCost c;
  c.margin = margin;
  const shaping::BoundReport report = shaping::check_bounds(shaped, ctx.bounds);
  c.worst_violation_db = report.worst_violation_db;
  double violation = report.worst_violation_db;
  if (ctx.penalty.measure == ViolationMeasure::Sum) {
    violation = 0.0;
    for (const auto& p : report.points) violation += p.violation_db;
  }
  c.rolloff_ok = shaping::check_rolloff(shaped, ctx.plant, ctx.rolloff.omega, ctx.rolloff.reduction_db);
  c.penalty = ctx.penalty.per_db * violation + (c.rolloff_ok ? 0.0 : ctx.penalty.rolloff);
  c.total = -c.margin + c.penalty;
  return c;
}

DesignCost margin_cost(std::span<const double> params, const CostContext& ctx) {
  if (params.size() != parameter_count(ctx.structure))
    throw std::invalid_argument("expected " + std::to_string(parameter_count(ctx.structure)) + " design parameters, got " +
                                std::to_string(params.size()));
  const shaping::Weights w = shaping::make_weights(decode_weights(params));
  const auto k = synthesis::FixedStructureController::from_parameters(params.subspan(kWeightParams), ctx.structure);
  const TransferFunction shaped = shaping::shape(ctx.plant, w.w1, w.w2).shaped;
  const double margin = synthesis::achieved_margin(realize(shaped), k.state_space());
  return loop_cost(shaped, margin, ctx);
}

DesignResult design_pso(const TransferFunction& plant, const FrequencyBounds& bounds, const DesignConfig& config) {
  const CostContext ctx{plant, bounds, config.structure, config.penalty, config.rolloff};
  SwarmConfig swarm = config.swarm;
  if (swarm.bounds.empty()) {
    swarm.bounds = {config.log10_gain, config.log10_corner, config.log10_corner,
                    config.log10_gain, config.log10_corner, config.log10_corner};
    for (std::size_t i = 0; i < config.structure.parameter_count(); ++i)
      swarm.bounds.push_back(config.controller_coefficient);
  }
  if (swarm.bounds.size() != parameter_count(config.structure))
    throw std::invalid_argument("PSO bounds do not match the parameter layout");

  const auto cost = [&](std::span<const double> x) { return margin_cost(to_physical(x), ctx).total; };
  DesignResult r;
  r.mode = DesignMode::Pso;
  r.swarm = pso_minimize(cost, swarm);
  std::vector<double> last;
  for (const auto& x : r.swarm.history_positions) {
    if (x != last) r.history_costs.push_back(margin_cost(to_physical(x), ctx));
    else r.history_costs.push_back(r.history_costs.back());
    last = x;
  }

  const std::vector<double> best = to_physical(r.swarm.best_position);
  r.weights = decode_weights(best);
  const shaping::Weights w = shaping::make_weights(*r.weights);
  r.fixed = synthesis::FixedStructureController::from_parameters(std::span(best).subspan(kWeightParams), config.structure);
  r.w1 = w.w1;
  r.w2 = w.w2;
  r.shaped = shaping::shape(plant, w.w1, w.w2).shaped;
  r.controller = r.fixed->transfer_function();
  r.cost = margin_cost(best, ctx);
  r.margin = r.cost.margin;
  r.bound_report = shaping::check_bounds(r.shaped, bounds);
  try {
    r.b_opt = synthesis::ncf(realize(r.shaped)).b_opt;
  } catch (const std::exception&) {
    r.b_opt = 0.0;
  }
  finish(r, plant);
  return r;
}

DesignResult design_fit100(const TransferFunction& plant, const FrequencyBounds& bounds, const DesignConfig& config) {
  const CostContext ctx{plant, bounds, config.structure, config.penalty, config.rolloff};
  DesignResult r;
  r.mode = DesignMode::Fit100;
  r.w1 = TransferFunction::gain(1.0);
  const auto fit = shaping::fit_minimum_phase(shaping::centering_target(plant, bounds), config.fit_order);
  r.w2 = fit.fit;
  r.fit_rms_db = fit.rms_db;
  r.shaped = shaping::shape(plant, r.w1, r.w2).shaped;
  r.bound_report = shaping::check_bounds(r.shaped, bounds);

  const lti::StateSpace shaped = realize(r.shaped);
  const synthesis::NcfData data = synthesis::ncf(shaped);
  r.b_opt = data.b_opt;
  r.gamma = config.gamma_factor * data.gamma_min;
  const lti::StateSpace k = synthesis::central_controller(shaped, data, r.gamma);
  r.controller = lti::ss_to_tf(k);
  r.margin = synthesis::achieved_margin(shaped, k);
  r.cost = loop_cost(r.shaped, r.margin, ctx);
  finish(r, plant);
  return r;
}

DesignResult design(DesignMode mode, const TransferFunction& plant, const FrequencyBounds& bounds,
                    const DesignConfig& config) {
  return mode == DesignMode::Pso ? design_pso(plant, bounds, config) : design_fit100(plant, bounds, config);
}

void write_history_csv(std::ostream& os, const DesignResult& result) {
  os << "iteration,gbest_cost,gbest_margin,worst_violation_db\n";
  os.precision(12);
  for (std::size_t i = 0; i < result.swarm.history.size(); ++i) {
    const DesignCost& c = result.history_costs.at(i);
    os << i << ',' << result.swarm.history[i] << ',' << c.margin << ',' << c.worst_violation_db << '\n';
  }
}

}  // namespace autopilot::pso
