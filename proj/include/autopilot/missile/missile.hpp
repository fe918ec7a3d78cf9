#pragma once

#include "autopilot/lti/transfer_function.hpp"

#include <string>

namespace autopilot::missile {

using lti::TransferFunction;

struct ActuatorParams {
  double omega_n = 200.0;  ///< rad/s
  double zeta = 0.7;
  /// Throws std::invalid_argument naming the bad parameter.
  void validate() const;
};

/// Nondimensional aerodynamic coefficients. Rate coefficients are per unit of
/// the reduced rate (rate * D / 2V).
struct AeroCoefficients {
  double C_y_beta = 0.0;
  double C_y_delta_r = 0.0;
  double C_y_r = 0.0;
  double C_z_alpha = 0.0;
  double C_z_delta_e = 0.0;
  double C_z_q = 0.0;
  double C_l_delta_a = 0.0;
  double C_l_p = 0.0;
  double C_m_alpha = 0.0;
  double C_m_delta_e = 0.0;
  double C_m_q = 0.0;
  double C_n_beta = 0.0;
  double C_n_delta_r = 0.0;
  double C_n_r = 0.0;
};

struct OperatingPoint {
  std::string id;
  double dynamic_pressure = 0.0;  ///< Pa
  double reference_area = 0.0;    ///< m^2
  double reference_length = 0.0;  ///< m, body diameter
  double mass = 0.0;              ///< kg
  double inertia_x = 0.0;         ///< kg m^2
  double inertia_y = 0.0;
  double inertia_z = 0.0;
  double speed_u = 0.0;  ///< m/s, axial
  double speed = 0.0;    ///< m/s, total
  AeroCoefficients coefficients;
  double altitude = 0.0;  ///< m, descriptive only
  double mach = 0.0;      ///< descriptive only

  void validate() const;
};

/// Dimensional stability and control derivatives of one flight condition.
struct DimensionalDerivatives {
  double roll_control = 0.0;   ///< L_delta_a
  double roll_damping = 0.0;   ///< L_p
  double normal_rate = 0.0;    ///< Z_q
  double normal_control = 0.0; ///< Z_delta
  double normal_alpha = 0.0;   ///< Z_alpha
  double pitch_control = 0.0;  ///< M_delta
  double pitch_alpha = 0.0;    ///< M_alpha
  double pitch_rate = 0.0;     ///< M_q
};

TransferFunction actuator_tf(const ActuatorParams& p);

DimensionalDerivatives dimensional_derivatives(const OperatingPoint& op);

/// Elevator to pitch rate, q/delta_e.
TransferFunction pitch_rate_tf(const DimensionalDerivatives& d, double speed);
/// Pitch rate to normal acceleration, a_z/q (shares the pitch-rate denominator).
TransferFunction accel_per_pitch_rate_tf(const DimensionalDerivatives& d, double speed);
/// Aileron to roll rate.
TransferFunction roll_tf(const DimensionalDerivatives& d, double inertia_x);

/// Pitch-rate loop closed through the actuator with gain k_q, followed by a_z/q.
TransferFunction open_loop_plant(const OperatingPoint& op, const ActuatorParams& actuator, double pitch_rate_gain);

inline constexpr double kReferencePlantGain = 863878246.0;

/// The published equilibrium-point plant: gain (s-30)(s+25) / ((s+121)(s+3)(s^2+20s+7933)).
TransferFunction reference_plant(double gain = kReferencePlantGain);
std::string reference_plant_factored(double gain = kReferencePlantGain);

}  // namespace autopilot::missile
