#include "autopilot/cli/config.hpp"

#include "autopilot/lti/frequency.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace autopilot::cli {

namespace {

constexpr std::string_view kKnownSections[] = {"design", "pso",     "simulation", "plant",          "output",
                                               "envelope", "actuator", "gains",   "operating_point"};

const io::Section* single(const io::Document& doc, std::string_view name, io::Diagnostics& diag) {
  const auto all = doc.all(name);
  if (all.size() > 1) diag.add(doc.source, all[1]->line, "[" + std::string(name) + "] given more than once");
  return all.empty() ? nullptr : all.front();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::ConfigError({path.string() + ": cannot open file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pso::Interval interval_or(io::SectionReader& r, std::string_view key, pso::Interval fallback) {
  const auto v = r.optional_list(key);
  if (!v) return fallback;
  if (v->size() != 2 || !((*v)[0] < (*v)[1])) {
    r.error(key, "expected 'min, max' with min < max");
    return fallback;
  }
  return {(*v)[0], (*v)[1]};
}

lti::Polynomial factor_product(const std::vector<double>& corners) {
  lti::Polynomial p = lti::Polynomial::constant(1.0);
  for (double c : corners) p = p * lti::Polynomial{1.0, c};
  return p;
}

void read_design(const io::Document& doc, const io::Section& sec, io::Diagnostics& diag, RunConfig& cfg) {
  io::SectionReader r(doc, sec, diag);
  const std::string mode = r.text_or("mode", "fit100");
  try {
    cfg.mode = parse_mode(mode);
  } catch (const std::invalid_argument& e) {
    r.error("mode", e.what());
  }
  pso::DesignConfig& d = cfg.design;
  d.fit_order = static_cast<int>(r.integer_or("fit_order", d.fit_order));
  if (d.fit_order < 0) r.error("fit_order", "must be non-negative");
  d.gamma_factor = r.number_or("gamma_factor", d.gamma_factor);
  if (!(d.gamma_factor > 1.0)) r.error("gamma_factor", "must exceed 1");
  d.structure.numerator_degree = static_cast<int>(r.integer_or("controller_numerator_degree", d.structure.numerator_degree));
  d.structure.denominator_degree =
      static_cast<int>(r.integer_or("controller_denominator_degree", d.structure.denominator_degree));
  if (d.structure.numerator_degree < 0 || d.structure.numerator_degree > d.structure.denominator_degree)
    r.error("controller_numerator_degree", "must lie in [0, controller_denominator_degree]");
  d.penalty.per_db = r.number_or("penalty_per_db", d.penalty.per_db);
  d.penalty.rolloff = r.number_or("penalty_rolloff", d.penalty.rolloff);
  if (d.penalty.per_db < 0.0) r.error("penalty_per_db", "must be non-negative");
  if (d.penalty.rolloff < 0.0) r.error("penalty_rolloff", "must be non-negative");
  const std::string measure = r.text_or("penalty_measure", "worst");
  if (measure == "worst") d.penalty.measure = pso::ViolationMeasure::Worst;
  else if (measure == "sum") d.penalty.measure = pso::ViolationMeasure::Sum;
  else r.error("penalty_measure", "expected 'worst' or 'sum'");
  d.rolloff.omega = r.number_or("rolloff_omega", d.rolloff.omega);
  d.rolloff.reduction_db = r.number_or("rolloff_reduction_db", d.rolloff.reduction_db);
  if (!(d.rolloff.omega > 0.0)) r.error("rolloff_omega", "must be positive");
  d.log10_gain = interval_or(r, "log10_gain_range", d.log10_gain);
  d.log10_corner = interval_or(r, "log10_corner_range", d.log10_corner);
  d.controller_coefficient = interval_or(r, "controller_coefficient_range", d.controller_coefficient);

  const double grid_min = r.number_or("grid_min", 0.01), grid_max = r.number_or("grid_max", 1e4);
  const auto grid_points = r.integer_or("grid_points", 100);
  if (!(grid_min > 0.0) || !(grid_max > grid_min)) r.error("grid_min", "grid must satisfy 0 < grid_min < grid_max");
  if (grid_points < 1) r.error("grid_points", "must be at least 1");
  const std::vector<double> grid =
      grid_points >= 1 && grid_min > 0.0 && grid_max > grid_min
          ? lti::logspace(grid_min, grid_max, static_cast<std::size_t>(grid_points))
          : shaping::default_bound_grid();
  const std::string bounds = r.text_or("bounds", "published");
  if (bounds == "published") {
    cfg.bounds = shaping::published_bounds(grid);
  } else if (bounds == "custom") {
    const double lo = r.positive("lower_gain"), hi = r.positive("upper_gain");
    if (lo > 0.0 && hi > 0.0 && hi < lo) r.error("upper_gain", "must not be below lower_gain");
    const auto zeros = r.optional_list("bound_zero_corners").value_or(std::vector<double>{});
    const auto poles = r.optional_list("bound_pole_corners").value_or(std::vector<double>{});
    if (zeros.size() > poles.size()) r.error("bound_zero_corners", "bounds must be proper");
    const lti::Polynomial num = factor_product(zeros), den = factor_product(poles);
    cfg.bounds = {{num.scaled(lo), den}, {num.scaled(hi), den}, grid};
  } else {
    r.error("bounds", "expected 'published' or 'custom'");
  }
  r.reject_unknown();
}

void read_swarm(const io::Document& doc, const io::Section& sec, io::Diagnostics& diag, RunConfig& cfg) {
  io::SectionReader r(doc, sec, diag);
  pso::SwarmConfig& s = cfg.design.swarm;
  s.particle_count = static_cast<int>(r.integer_or("particles", s.particle_count));
  s.iterations = static_cast<int>(r.integer_or("iterations", s.iterations));
  s.inertia = r.number_or("inertia", s.inertia);
  s.cognitive = r.number_or("cognitive", s.cognitive);
  s.social = r.number_or("social", s.social);
  const long long seed = r.integer_or("seed", static_cast<long long>(s.seed));
  if (seed < 0) r.error("seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  const long long threads = r.integer_or("threads", 0);
  if (threads < 0) r.error("threads", "must be non-negative");
  s.threads = static_cast<unsigned>(threads);
  cfg.threads = s.threads;
  // bounds come from the design ranges; check the scalar settings here
  pso::SwarmConfig probe = s;
  probe.bounds = {pso::Interval{0.0, 1.0}};
  try {
    probe.validate();
  } catch (const std::invalid_argument& e) {
    diag.add(doc.source, sec.line, "[pso] " + std::string(e.what()));
  }
  r.reject_unknown();
}

void read_simulation(const io::Document& doc, const io::Section& sec, io::Diagnostics& diag, RunConfig& cfg) {
  io::SectionReader r(doc, sec, diag);
  SimulationOptions& s = cfg.simulation;
  s.dt = r.number_or("dt", s.dt);
  s.t_final = r.number_or("t_final", s.t_final);
  s.reference = r.number_or("reference", s.reference);
  if (!(s.dt > 0.0)) r.error("dt", "must be positive");
  if (!(s.t_final > s.dt)) r.error("t_final", "must exceed dt");
  if (s.reference == 0.0) r.error("reference", "must be nonzero");
  s.limits.overshoot = r.number_or("max_overshoot", s.limits.overshoot);
  s.limits.steady_state_error = r.number_or("max_steady_state_error", s.limits.steady_state_error);
  s.limits.overshoot_time = r.number_or("max_overshoot_time", s.limits.overshoot_time);
  r.reject_unknown();
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

pso::DesignMode parse_mode(std::string_view name) {
  if (name == "pso") return pso::DesignMode::Pso;
  if (name == "fit100") return pso::DesignMode::Fit100;
  throw std::invalid_argument("unknown design mode '" + std::string(name) + "' (expected pso or fit100)");
}

std::string_view mode_name(pso::DesignMode mode) { return mode == pso::DesignMode::Pso ? "pso" : "fit100"; }

RunConfig read_run_config(const io::Document& doc, const std::filesystem::path& base_directory) {
  io::Diagnostics diag;
  RunConfig cfg;
  for (const io::Section& sec : doc.sections) {
    if (std::find(std::begin(kKnownSections), std::end(kKnownSections), sec.name) == std::end(kKnownSections))
      diag.add(doc.source, sec.line, "unknown section [" + sec.name + "]");
  }
  if (const auto* sec = single(doc, "design", diag)) read_design(doc, *sec, diag, cfg);
  if (const auto* sec = single(doc, "pso", diag)) read_swarm(doc, *sec, diag, cfg);
  if (const auto* sec = single(doc, "simulation", diag)) read_simulation(doc, *sec, diag, cfg);
  if (const auto* sec = single(doc, "output", diag)) {
    io::SectionReader r(doc, *sec, diag);
    cfg.output_directory = r.text_or("directory", cfg.output_directory.string());
    r.reject_unknown();
  }

  const bool inline_envelope = !doc.all("operating_point").empty() || !doc.all("gains").empty();
  if (const auto* sec = single(doc, "envelope", diag)) {
    io::SectionReader r(doc, *sec, diag);
    const std::string path = r.text("path");
    r.reject_unknown();
    if (inline_envelope) diag.add(doc.source, sec->line, "[envelope] path given together with inline envelope sections");
    if (!path.empty() && !inline_envelope) {
      const std::filesystem::path file = base_directory / path;
      try {
        const std::string bytes = read_file(file);
        cfg.hash = fnv1a(bytes);
        std::istringstream in(bytes);
        cfg.envelope = missile::load_envelope(in, file.string());
      } catch (const io::ConfigError& e) {
        diag.merge(e);
      }
    }
  } else if (inline_envelope) {
    try {
      cfg.envelope = missile::read_envelope(doc);
    } catch (const io::ConfigError& e) {
      diag.merge(e);
    }
  }

  cfg.plant_source = cfg.envelope ? PlantSource::Envelope : PlantSource::Reference;
  if (const auto* sec = single(doc, "plant", diag)) {
    io::SectionReader r(doc, *sec, diag);
    const std::string src = r.text_or("source", cfg.envelope ? "envelope" : "reference");
    if (src == "reference") cfg.plant_source = PlantSource::Reference;
    else if (src == "envelope") cfg.plant_source = PlantSource::Envelope;
    else r.error("source", "expected 'reference' or 'envelope'");
    if (cfg.plant_source == PlantSource::Envelope && !cfg.envelope)
      r.error("source", "'envelope' requires an envelope");
    cfg.reference_gain = r.number_or("gain", cfg.reference_gain);
    if (cfg.reference_gain == 0.0) r.error("gain", "must be nonzero");
    r.reject_unknown();
  }
  diag.throw_if_any();
  return cfg;
}

RunConfig parse_run_config(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  RunConfig cfg = read_run_config(io::parse_structured_text(in, source));
  cfg.hash = fnv1a(text, cfg.hash == 0 ? fnv1a({}) : cfg.hash);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  const io::Document doc = io::parse_structured_text(in, path.string());
  RunConfig cfg = read_run_config(doc, path.parent_path());
  cfg.source = path;
  cfg.hash = fnv1a(bytes, cfg.hash == 0 ? fnv1a({}) : cfg.hash);
  return cfg;
}

}  // namespace autopilot::cli
