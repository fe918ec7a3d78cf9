#include "autopilot/missile/missile.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace autopilot::missile {

using lti::Polynomial;

void ActuatorParams::validate() const {
  if (!(omega_n > 0.0) || !std::isfinite(omega_n)) throw std::invalid_argument("actuator omega_n must be positive");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw std::invalid_argument("actuator zeta must be positive");
}

void OperatingPoint::validate() const {
  const std::pair<const char*, double> positive[] = {
      {"dynamic_pressure", dynamic_pressure}, {"reference_area", reference_area},
      {"reference_length", reference_length}, {"mass", mass}, {"inertia_y", inertia_y}, {"speed", speed}};
  for (const auto& [name, v] : positive)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("operating point '" + id + "': " + name + " must be positive");
}

TransferFunction actuator_tf(const ActuatorParams& p) {
  p.validate();
  const double w2 = p.omega_n * p.omega_n;
  return {Polynomial{w2}, Polynomial{1.0, 2.0 * p.zeta * p.omega_n, w2}};
}

DimensionalDerivatives dimensional_derivatives(const OperatingPoint& op) {
  const double q = op.dynamic_pressure, s = op.reference_area, d = op.reference_length;
  const double v = op.speed, m = op.mass, iy = op.inertia_y;
  const AeroCoefficients& c = op.coefficients;
  DimensionalDerivatives out;
  out.roll_control = q * s * d * c.C_l_delta_a;
  out.normal_rate = s * q * d * c.C_z_q / m;
  out.roll_damping = q * s * d * c.C_l_p * (d / (2.0 * v));
  out.pitch_control = s * q * d * c.C_m_delta_e / iy;
  out.normal_control = s * q * c.C_z_delta_e / m;
  out.pitch_alpha = s * q * d * c.C_m_alpha / iy;
  out.normal_alpha = s * q * c.C_z_alpha / m;
  out.pitch_rate = s * q * d * d * c.C_m_q / (iy * v);
  return out;
}

namespace {

Polynomial short_period_denominator(const DimensionalDerivatives& d, double v) {
  return {1.0, -(d.pitch_rate + d.normal_alpha / v),
          (d.normal_alpha * d.pitch_rate - d.pitch_alpha * d.normal_rate) / v - d.pitch_alpha};
}

void require_speed(double v) {
  if (!(v > 0.0)) throw std::invalid_argument("speed must be positive");
}

}  // namespace

TransferFunction pitch_rate_tf(const DimensionalDerivatives& d, double speed) {
  require_speed(speed);
  const Polynomial num{d.pitch_control, d.normal_control * d.pitch_alpha - d.normal_alpha * d.pitch_control};
  return {num, short_period_denominator(d, speed)};
}

TransferFunction accel_per_pitch_rate_tf(const DimensionalDerivatives& d, double speed) {
  require_speed(speed);
  const Polynomial num{d.normal_control, d.pitch_control * d.normal_rate - d.normal_control * d.pitch_rate,
                       d.normal_alpha * d.pitch_control - d.normal_control * d.pitch_alpha};
  return {num, short_period_denominator(d, speed)};
}

TransferFunction roll_tf(const DimensionalDerivatives& d, double inertia_x) {
  if (!(inertia_x > 0.0)) throw std::invalid_argument("roll inertia must be positive");
  return {Polynomial{d.roll_control}, Polynomial{inertia_x, -d.roll_damping}};
}

TransferFunction open_loop_plant(const OperatingPoint& op, const ActuatorParams& actuator, double pitch_rate_gain) {
  op.validate();
  const DimensionalDerivatives d = dimensional_derivatives(op);
  const TransferFunction inner = series(scale(actuator_tf(actuator), pitch_rate_gain), pitch_rate_tf(d, op.speed));
  return series(feedback_unity(inner), accel_per_pitch_rate_tf(d, op.speed));
}

TransferFunction reference_plant(double gain) {
  const Polynomial num = Polynomial{1.0, -30.0} * Polynomial{1.0, 25.0};
  const Polynomial den = Polynomial{1.0, 121.0} * Polynomial{1.0, 3.0} * Polynomial{1.0, 20.0, 7933.0};
  return {num.scaled(gain), den};
}

std::string reference_plant_factored(double gain) {
  return fmt::format("{}(s-30)(s+25)/((s+121)(s+3)(s^2+20s+7933))", gain);
}

}  // namespace autopilot::missile
