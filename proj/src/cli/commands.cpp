#include "autopilot/cli/commands.hpp"

#include "autopilot/lti/frequency.hpp"
#include "autopilot/synthesis/loop_shaping.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

namespace autopilot::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using lti::TransferFunction;

namespace {

lti::StateSpace realize(const TransferFunction& g) { return lti::balance(lti::tf_to_ss(g)); }

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

Json complex_list(const std::vector<lti::Complex>& roots) {
  Json out = Json::array();
  for (const auto& r : roots) out.push_back({r.real(), r.imag()});
  return out;
}

Json tf_json(const TransferFunction& g) {
  return {{"numerator", g.numerator().coefficients()},
          {"denominator", g.denominator().coefficients()},
          {"zeros", complex_list(lti::zeros(g))},
          {"poles", complex_list(lti::poles(g))},
          {"factored", factored_form(g)}};
}

Json header(const RunConfig& cfg, std::string_view kind) {
  return {{"schema", fmt::format("autopilot.{}", kind)},
          {"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"config_hash", fmt::format("{:016x}", cfg.hash)},
          {"seed", cfg.seed()}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path output_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.output_directory);
  return cfg.output_directory;
}

std::string number(double v) { return fmt::format("{:.6g}", v); }

std::string linear_factor(double root) {
  if (root == 0.0) return "s";
  return root > 0 ? fmt::format("(s-{})", number(root)) : fmt::format("(s+{})", number(-root));
}

std::string factors(const std::vector<lti::Complex>& roots, std::size_t& count) {
  std::vector<lti::Complex> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  std::string out;
  count = 0;
  for (const auto& r : sorted) {
    if (r.imag() < 0.0) continue;
    ++count;
    if (r.imag() == 0.0) {
      out += linear_factor(r.real());
    } else {
      const double b = -2.0 * r.real(), c = std::norm(r);
      out += b == 0.0 ? fmt::format("(s^2+{})", number(c))
                      : fmt::format("(s^2{}{}s+{})", b < 0 ? "-" : "+", number(std::abs(b)), number(c));
    }
  }
  return out;
}

Json metrics_json(const sim::StepMetrics& m) {
  return {{"overshoot_time", m.overshoot_time},
          {"overshoot", m.overshoot},
          {"steady_state_error", m.steady_state_error},
          {"maximum_rate_of_angle_change", m.max_rate}};
}

Json limits_json(const StepLimits& l) {
  return {{"max_overshoot", l.overshoot},
          {"max_steady_state_error", l.steady_state_error},
          {"max_overshoot_time", l.overshoot_time}};
}

std::string file_stem(const std::string& id) {
  std::string out = id;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return out;
}

Json design_json(const RunConfig& cfg, const DesignOutcome& d) {
  const pso::DesignResult& r = d.result;
  Json j = header(cfg, "design");
  j["mode"] = mode_name(r.mode);
  j["nominal_id"] = d.nominal_id();
  j["nominal_plant"] = tf_json(d.plant);
  j["w1"] = tf_json(r.w1);
  j["w2"] = tf_json(r.w2);
  j["shaped_plant"] = tf_json(r.shaped);
  j["controller"] = tf_json(r.controller);
  j["final_controller"] = tf_json(r.final_controller);
  j["b_opt"] = r.b_opt;
  j["b_achieved"] = r.margin;
  if (r.mode == pso::DesignMode::Fit100) {
    j["gamma"] = r.gamma;
    j["fit_order"] = cfg.design.fit_order;
    j["fit_rms_db"] = r.fit_rms_db;
  } else {
    j["weights"] = {{"K1", r.weights->K1}, {"alpha1", r.weights->alpha1}, {"beta1", r.weights->beta1},
                    {"K2", r.weights->K2}, {"alpha2", r.weights->alpha2}, {"beta2", r.weights->beta2}};
    j["cost"] = {{"total", r.cost.total}, {"margin", r.cost.margin}, {"penalty", r.cost.penalty}};
    j["iterations"] = cfg.design.swarm.iterations;
    j["particles"] = cfg.design.swarm.particle_count;
  }
  j["bound_compliance"] = {{"pass", r.bound_report.pass()},
                           {"pass_fraction", r.bound_report.pass_fraction()},
                           {"worst_violation_db", r.bound_report.worst_violation_db},
                           {"grid_points", r.bound_report.points.size()}};
  j["rolloff"] = {{"omega", cfg.design.rolloff.omega},
                  {"reduction_db", cfg.design.rolloff.reduction_db},
                  {"pass", r.cost.rolloff_ok}};
  j["stabilizing"] = r.stabilizing;
  j["flag"] = r.flag;
  return j;
}

}  // namespace

std::string factored_form(const TransferFunction& g) {
  if (g.is_zero()) return "0";
  std::size_t nz = 0, np = 0;
  const std::string num = factors(lti::zeros(g), nz);
  const std::string den = factors(lti::poles(g), np);
  std::string out = number(g.numerator().leading()) + num;
  if (np == 0) return out;
  return out + "/" + (np > 1 ? "(" + den + ")" : den);
}

PlantFamily plant_family(const RunConfig& cfg) {
  PlantFamily f;
  if (cfg.plant_source == PlantSource::Envelope && cfg.envelope) {
    for (const auto& op : cfg.envelope->points) f.ids.push_back(op.id);
    f.plants = cfg.envelope->plants();
  } else {
    f.ids.push_back("reference");
    f.plants.push_back(missile::reference_plant(cfg.reference_gain));
  }
  return f;
}

EnvelopeAnalysis analyze_envelope(const RunConfig& cfg) {
  EnvelopeAnalysis a;
  a.family = plant_family(cfg);
  a.matrix = vgap::vgap_matrix(a.family.plants, {}, cfg.threads);
  a.nominal = vgap::select_nominal(a.matrix);
  return a;
}

lti::StateSpace DesignOutcome::controller() const {
  const lti::StateSpace k = realize(result.controller);
  return lti::balance(lti::series(lti::series(realize(result.w2), k), realize(result.w1)));
}

const std::string& DesignOutcome::nominal_id() const { return envelope.family.ids.at(envelope.nominal.index); }

DesignOutcome run_design(const RunConfig& cfg) {
  DesignOutcome d;
  d.envelope = analyze_envelope(cfg);
  d.plant = d.envelope.family.plants.at(d.envelope.nominal.index);
  d.result = pso::design(cfg.mode, d.plant, cfg.bounds, cfg.design);
  return d;
}

std::string VerifyReport::diagnostic() const {
  if (disagreement) {
    std::string unstable;
    for (const auto& p : points)
      if (!p.closed_loop_stable) unstable += (unstable.empty() ? "" : ", ") + p.id;
    return fmt::format("certificate b = {:.6g} > r* = {:.6g} holds but closed loops are unstable at: {}", margin,
                       worst_shaped_gap, unstable);
  }
  if (!certified) return fmt::format("margin b = {:.6g} does not exceed r* = {:.6g}", margin, worst_shaped_gap);
  if (!all_stable) return "closed-loop pole check failed";
  return "certified and pole-checked";
}

VerifyReport run_verify(const RunConfig& cfg, const DesignOutcome& design) {
  const PlantFamily& fam = design.envelope.family;
  const std::size_t n = fam.plants.size(), nominal = design.envelope.nominal.index;
  const pso::DesignResult& r = design.result;
  const lti::StateSpace k = design.controller();
  VerifyReport v;
  v.points.resize(n);
  v.margin = r.margin;
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    PointVerdict& p = v.points[i];
    p.id = fam.ids[i];
    p.raw_gap = design.envelope.matrix.value(i, nominal);
    const TransferFunction shaped = shaping::shape(fam.plants[i], r.w1, r.w2).shaped;
    const vgap::VgapResult g = vgap::vgap_metric(shaped, r.shaped);
    p.shaped_gap = g.value;
    p.winding_ok = g.winding_ok;
    const lti::StateSpace plant = realize(fam.plants[i]);
    p.closed_loop_stable = synthesis::internally_stable(plant, k);
    p.spectral_abscissa = lti::spectral_abscissa(sim::closed_loop(plant, k).system.A());
  });
  v.all_stable = true;
  for (const auto& p : v.points) {
    v.worst_raw_gap = std::max(v.worst_raw_gap, p.raw_gap);
    v.worst_shaped_gap = std::max(v.worst_shaped_gap, p.shaped_gap);
    v.all_stable = v.all_stable && p.closed_loop_stable;
  }
  v.certified = r.stabilizing && v.margin > v.worst_shaped_gap;
  v.disagreement = v.certified && !v.all_stable;
  return v;
}

bool SimulationPoint::within(const StepLimits& limits) const {
  return metrics && metrics->overshoot <= limits.overshoot && metrics->steady_state_error <= limits.steady_state_error &&
         metrics->overshoot_time <= limits.overshoot_time;
}

std::vector<SimulationPoint> run_simulation(const RunConfig& cfg, const DesignOutcome& design) {
  const PlantFamily& fam = design.envelope.family;
  const lti::StateSpace k = design.controller();
  const SimulationOptions& opt = cfg.simulation;
  std::vector<SimulationPoint> out(fam.plants.size());
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    SimulationPoint& p = out[i];
    p.id = fam.ids[i];
    const sim::ClosedLoop cl = sim::closed_loop(realize(fam.plants[i]), k);
    if (!lti::is_hurwitz(cl.system.A())) p.flag = "closed loop unstable";
    auto series = sim::step_responses(lti::scale(cl.system, opt.reference), opt.t_final, opt.dt);
    p.output = std::move(series[0]);
    p.control = std::move(series[1]);
    p.control_rate = std::move(series[2]);
    if (!p.flag.empty()) return;
    try {
      p.metrics = sim::compute_metrics(p.output, p.control, opt.reference);
    } catch (const sim::NotSettledError& e) {
      p.flag = e.what();
    }
  });
  return out;
}

int cmd_model(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = output_dir(cfg);
  const TransferFunction ref = missile::reference_plant(cfg.reference_gain);
  Json j = header(cfg, "plant");
  j["id"] = "reference";
  j["plant"] = tf_json(ref);
  j["plant"]["factored"] = missile::reference_plant_factored(cfg.reference_gain);
  write_json(dir / "reference_plant.json", j);
  write_text(dir / "reference_plant.txt", missile::reference_plant_factored(cfg.reference_gain) + "\n");
  log << "reference plant: " << missile::reference_plant_factored(cfg.reference_gain) << "\n";
  if (!cfg.envelope) return kExitOk;

  const missile::Envelope& env = *cfg.envelope;
  for (const auto& op : env.points) {
    const missile::DimensionalDerivatives d = missile::dimensional_derivatives(op);
    Json p = header(cfg, "plant");
    p["id"] = op.id;
    p["derivatives"] = {{"L_delta_a", d.roll_control}, {"L_p", d.roll_damping},   {"Z_q", d.normal_rate},
                        {"Z_delta_e", d.normal_control}, {"Z_alpha", d.normal_alpha}, {"M_delta_e", d.pitch_control},
                        {"M_alpha", d.pitch_alpha},     {"M_q", d.pitch_rate}};
    p["actuator"] = tf_json(missile::actuator_tf(env.actuator));
    p["pitch_rate"] = tf_json(missile::pitch_rate_tf(d, op.speed));
    p["accel_per_pitch_rate"] = tf_json(missile::accel_per_pitch_rate_tf(d, op.speed));
    if (op.inertia_x > 0.0) p["roll"] = tf_json(missile::roll_tf(d, op.inertia_x));
    p["k_q"] = env.pitch_rate_gain;
    p["plant"] = tf_json(missile::open_loop_plant(op, env.actuator, env.pitch_rate_gain));
    write_json(dir / ("plant_" + file_stem(op.id) + ".json"), p);
    log << op.id << ": " << p["plant"]["factored"].get<std::string>() << "\n";
  }
  return kExitOk;
}

int cmd_envelope(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = output_dir(cfg);
  const EnvelopeAnalysis a = analyze_envelope(cfg);
  {
    std::ofstream csv(dir / "vgap_matrix.csv", std::ios::binary);
    vgap::write_vgap_csv(csv, a.matrix, a.family.ids);
  }
  Json j = header(cfg, "envelope");
  j["ids"] = a.family.ids;
  Json rows = Json::array();
  Json failures = Json::array();
  for (std::size_t i = 0; i < a.matrix.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.matrix.size(); ++k) {
      row.push_back(a.matrix.value(i, k));
      if (k > i && !a.matrix.at(i, k).winding_ok) {
        failures.push_back({{"a", a.family.ids[i]}, {"b", a.family.ids[k]}});
        log << "winding condition fails for " << a.family.ids[i] << " / " << a.family.ids[k] << "\n";
      }
    }
    rows.push_back(row);
  }
  j["vgap"] = rows;
  j["winding_failures"] = failures;
  j["nominal_index"] = a.nominal.index;
  j["nominal_id"] = a.family.ids[a.nominal.index];
  j["worst_gap"] = a.nominal.worst_gap;
  write_json(dir / "envelope_report.json", j);
  log << fmt::format("nominal {} with worst gap r* = {:.6g}\n", a.family.ids[a.nominal.index], a.nominal.worst_gap);
  return kExitOk;
}

int cmd_design(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = output_dir(cfg);
  const DesignOutcome d = run_design(cfg);
  const pso::DesignResult& r = d.result;
  write_json(dir / "design_report.json", design_json(cfg, d));
  Json c = header(cfg, "controller");
  c["controller"] = tf_json(r.final_controller);
  write_json(dir / "controller.json", c);
  {
    std::ofstream csv(dir / "bounds.csv", std::ios::binary);
    shaping::write_bound_csv(csv, r.bound_report);
  }
  {
    std::ofstream csv(dir / "shaped_frequency.csv", std::ios::binary);
    lti::write_frequency_csv(csv, lti::freq_response(r.shaped, lti::logspace(1e-3, 1e5, 400)));
  }
  if (r.mode == pso::DesignMode::Pso) {
    std::ofstream csv(dir / "pso_history.csv", std::ios::binary);
    pso::write_history_csv(csv, r);
  }
  log << fmt::format("{} design on {}: b_opt = {:.6g}, b = {:.6g}, bounds {:.0f}% ({:.3g} dB worst), roll-off {}\n",
                     mode_name(r.mode), d.nominal_id(), r.b_opt, r.margin, 100.0 * r.bound_report.pass_fraction(),
                     r.bound_report.worst_violation_db, r.cost.rolloff_ok ? "ok" : "FAIL");
  if (!r.flag.empty()) {
    log << r.flag << "\n";
    return kExitNoStabilizingCandidate;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = output_dir(cfg);
  const DesignOutcome d = run_design(cfg);
  const VerifyReport v = run_verify(cfg, d);
  Json j = header(cfg, "verify");
  j["mode"] = mode_name(d.result.mode);
  j["nominal_id"] = d.nominal_id();
  j["b_opt"] = d.result.b_opt;
  j["b_achieved"] = v.margin;
  j["worst_raw_gap"] = v.worst_raw_gap;
  j["r_star"] = v.worst_shaped_gap;
  j["bound_pass_fraction"] = d.result.bound_report.pass_fraction();
  j["envelope_certified"] = v.certified;
  j["all_closed_loops_stable"] = v.all_stable;
  j["disagreement"] = v.disagreement;
  j["verdict"] = v.pass() ? "PASS" : "FAIL";
  j["diagnostic"] = v.diagnostic();
  Json pts = Json::array();
  for (const auto& p : v.points)
    pts.push_back({{"id", p.id},
                   {"raw_gap", p.raw_gap},
                   {"shaped_gap", p.shaped_gap},
                   {"winding_ok", p.winding_ok},
                   {"closed_loop_stable", p.closed_loop_stable},
                   {"spectral_abscissa", p.spectral_abscissa}});
  j["points"] = pts;
  write_json(dir / "verify_report.json", j);
  log << (v.pass() ? "PASS" : "FAIL") << ": " << v.diagnostic() << "\n";
  if (v.disagreement) log << "error: stability certificate disagrees with the pole check\n";
  if (!d.result.flag.empty()) {
    log << d.result.flag << "\n";
    return kExitNoStabilizingCandidate;
  }
  return v.pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_simulate(const RunConfig& cfg, bool table1_check, std::ostream& log) {
  const fs::path dir = output_dir(cfg);
  const DesignOutcome d = run_design(cfg);
  if (!d.result.flag.empty()) {
    log << d.result.flag << "\n";
    return kExitNoStabilizingCandidate;
  }
  const std::vector<SimulationPoint> pts = run_simulation(cfg, d);
  Json summary = header(cfg, "simulation");
  summary["dt"] = cfg.simulation.dt;
  summary["t_final"] = cfg.simulation.t_final;
  summary["reference"] = cfg.simulation.reference;
  if (table1_check) summary["limits"] = limits_json(cfg.simulation.limits);
  Json list = Json::array();
  bool all_within = true;
  for (const auto& p : pts) {
    {
      std::ofstream csv(dir / ("step_" + file_stem(p.id) + ".csv"), std::ios::binary);
      sim::write_time_series_csv(csv, cfg.simulation.reference, p.output, p.control, p.control_rate);
    }
    Json m = header(cfg, "metrics");
    m["id"] = p.id;
    m["metrics"] = p.metrics ? metrics_json(*p.metrics) : Json(nullptr);
    m["flag"] = p.flag;
    if (table1_check) {
      m["within_limits"] = p.within(cfg.simulation.limits);
      all_within = all_within && p.within(cfg.simulation.limits);
    }
    write_json(dir / ("metrics_" + file_stem(p.id) + ".json"), m);
    list.push_back({{"id", p.id}, {"metrics", m["metrics"]}, {"flag", p.flag}});
    if (table1_check) list.back()["within_limits"] = p.within(cfg.simulation.limits);
    if (p.metrics)
      log << fmt::format("{}: overshoot {:.4g} at {:.4g} s, steady-state error {:.4g}, max rate {:.4g}/s{}\n", p.id,
                         p.metrics->overshoot, p.metrics->overshoot_time, p.metrics->steady_state_error,
                         p.metrics->max_rate,
                         table1_check ? (p.within(cfg.simulation.limits) ? " [ok]" : " [outside limits]") : "");
    else
      log << p.id << ": " << p.flag << "\n";
  }
  summary["points"] = list;
  write_json(dir / "simulation_report.json", summary);
  return table1_check && !all_within ? kExitVerificationFailed : kExitOk;
}

}  // namespace autopilot::cli
