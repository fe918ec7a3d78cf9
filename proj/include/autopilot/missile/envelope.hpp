#pragma once

#include "autopilot/io/structured_text.hpp"
#include "autopilot/missile/missile.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace autopilot::missile {

struct Envelope {
  ActuatorParams actuator;
  double pitch_rate_gain = 0.0;  ///< k_q
  std::vector<OperatingPoint> points;

  [[nodiscard]] std::vector<TransferFunction> plants() const;
};

/// Reads [actuator], [gains] and repeated [operating_point] sections; other
/// sections are left to the caller. Throws io::ConfigError listing every problem.
Envelope read_envelope(const io::Document& doc);
Envelope load_envelope(std::istream& in, const std::string& source = "<input>");
Envelope load_envelope_file(const std::filesystem::path& path);

/// Inverse of read_envelope.
void write_envelope(std::ostream& os, const Envelope& env, const std::string& header_comment = {});

/// Non-physical test envelope: one base condition with dynamic pressure scaled by each factor.
Envelope synthetic_envelope(std::span<const double> pressure_factors);
Envelope synthetic_envelope();

/// Same points with dynamic pressure multiplied by `factor`, ids suffixed.
Envelope scale_dynamic_pressure(const Envelope& env, std::span<const double> factors);

}  // namespace autopilot::missile
