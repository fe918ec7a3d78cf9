#pragma once

#include "autopilot/missile/envelope.hpp"
#include "autopilot/pso/design.hpp"
#include "autopilot/shaping/bounds.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace autopilot::cli {

enum class PlantSource { Reference, Envelope };

/// Step-response limits for the --table1-check comparison.
struct StepLimits {
  double overshoot = 0.06;
  double steady_state_error = 0.02;
  double overshoot_time = 1.0;  ///< s
};

struct SimulationOptions {
  double dt = 1e-4;
  double t_final = 5.0;
  double reference = 1.0;
  StepLimits limits;
};

struct RunConfig {
  std::filesystem::path source;  ///< config file, empty for in-memory documents
  std::uint64_t hash = 0;        ///< FNV-1a over the config bytes and any included envelope file
  std::optional<missile::Envelope> envelope;
  PlantSource plant_source = PlantSource::Reference;
  double reference_gain = missile::kReferencePlantGain;
  pso::DesignMode mode = pso::DesignMode::Fit100;
  pso::DesignConfig design;
  shaping::FrequencyBounds bounds = shaping::published_bounds();
  SimulationOptions simulation;
  std::filesystem::path output_directory = "out";
  unsigned threads = 0;

  [[nodiscard]] std::uint64_t seed() const { return design.swarm.seed; }
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

/// Sections: [design], [pso], [simulation], [plant], [output], [envelope] (path = file),
/// or the envelope's own sections inline. Throws io::ConfigError.
RunConfig read_run_config(const io::Document& doc, const std::filesystem::path& base_directory = {});
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view text, const std::string& source = "<input>");

pso::DesignMode parse_mode(std::string_view name);
std::string_view mode_name(pso::DesignMode mode);

}  // namespace autopilot::cli
