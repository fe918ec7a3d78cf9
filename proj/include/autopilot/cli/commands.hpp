#pragma once

#include "autopilot/cli/config.hpp"
#include "autopilot/lti/state_space.hpp"
#include "autopilot/pso/design.hpp"
#include "autopilot/sim/simulate.hpp"
#include "autopilot/vgap/vgap.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace autopilot::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitStatus : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNoStabilizingCandidate = 3,
  kExitVerificationFailed = 4,
};

/// Plants the commands operate on: the envelope points, or the reference plant alone.
struct PlantFamily {
  std::vector<std::string> ids;
  std::vector<lti::TransferFunction> plants;
};
PlantFamily plant_family(const RunConfig& cfg);

struct EnvelopeAnalysis {
  PlantFamily family;
  vgap::VgapMatrix matrix{0};
  vgap::NominalSelection nominal;
};
EnvelopeAnalysis analyze_envelope(const RunConfig& cfg);

struct DesignOutcome {
  EnvelopeAnalysis envelope;
  lti::TransferFunction plant;  ///< the nominal
  pso::DesignResult result;
  /// W1 K W2 assembled from the component realizations.
  [[nodiscard]] lti::StateSpace controller() const;
  [[nodiscard]] const std::string& nominal_id() const;
};
DesignOutcome run_design(const RunConfig& cfg);

struct PointVerdict {
  std::string id;
  double raw_gap = 0.0;     ///< plant v-gap to the nominal
  double shaped_gap = 0.0;  ///< shaped-plant v-gap to the shaped nominal
  bool winding_ok = true;
  bool closed_loop_stable = false;
  double spectral_abscissa = 0.0;
};

struct VerifyReport {
  std::vector<PointVerdict> points;
  double worst_raw_gap = 0.0;
  double worst_shaped_gap = 0.0;  ///< r*
  double margin = 0.0;            ///< b achieved on the shaped nominal
  bool certified = false;         ///< margin > r*
  bool all_stable = false;
  bool disagreement = false;  ///< certified yet some closed loop unstable
  [[nodiscard]] bool pass() const { return certified && all_stable && !disagreement; }
  [[nodiscard]] std::string diagnostic() const;
};
VerifyReport run_verify(const RunConfig& cfg, const DesignOutcome& design);

struct SimulationPoint {
  std::string id;
  sim::TimeSeries output, control, control_rate;
  std::optional<sim::StepMetrics> metrics;
  std::string flag;  ///< why metrics are missing
  [[nodiscard]] bool within(const StepLimits& limits) const;
};
std::vector<SimulationPoint> run_simulation(const RunConfig& cfg, const DesignOutcome& design);

/// Human-readable gain-and-factors form, e.g. 2(s-1)(s^2+2s+5)/((s+3)(s+4)).
std::string factored_form(const lti::TransferFunction& g);

/// Each command writes into cfg.output_directory and returns an ExitStatus.
int cmd_model(const RunConfig& cfg, std::ostream& log);
int cmd_envelope(const RunConfig& cfg, std::ostream& log);
int cmd_design(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, bool table1_check, std::ostream& log);

}  // namespace autopilot::cli
