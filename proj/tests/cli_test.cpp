#include "autopilot/cli/commands.hpp"
#include "autopilot/io/structured_text.hpp"
#include "autopilot/missile/envelope.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace autopilot;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kConfigs = AUTOPILOT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "autopilot_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + AUTOPILOT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string envelope_text(std::span<const double> factors) {
  std::ostringstream os;
  missile::write_envelope(os, missile::synthetic_envelope(factors));
  return os.str();
}

cli::RunConfig inline_config(const std::string& text, const fs::path& out) {
  cli::RunConfig cfg = cli::parse_run_config(text);
  cfg.output_directory = out;
  return cfg;
}

cli::RunConfig file_config(const std::string& name, const fs::path& out) {
  cli::RunConfig cfg = cli::load_run_config(kConfigs / name);
  cfg.output_directory = out;
  return cfg;
}

std::ostringstream sink;

}  // namespace

TEST_CASE("model emits the canned plant string") {
  const fs::path out = scratch("model_ref");
  CHECK(run_cli("model --out \"" + out.string() + "\"") == 0);
  CHECK(slurp(out / "reference_plant.txt") == "863878246(s-30)(s+25)/((s+121)(s+3)(s^2+20s+7933))\n");
  const Json j = read_json(out / "reference_plant.json");
  CHECK(j["schema_version"] == cli::kSchemaVersion);
  CHECK(j["plant"]["factored"] == "863878246(s-30)(s+25)/((s+121)(s+3)(s^2+20s+7933))");
  CHECK(j["plant"]["zeros"].size() == 2);
}

TEST_CASE("config errors exit with status 2") {
  const fs::path dir = scratch("config_errors");
  {
    std::ofstream(dir / "empty_envelope.txt") << "# no points\n";
    std::ofstream(dir / "empty.cfg") << "[envelope]\npath = empty_envelope.txt\n";
  }
  CHECK(run_cli("model --config \"" + (dir / "empty.cfg").string() + "\" --out \"" + dir.string() + "\"") == 2);
  {
    std::ofstream(dir / "unknown.cfg") << "[no_such_section]\nx = 1\n";
    std::ofstream(dir / "missing.cfg") << "[envelope]\npath = not_there.txt\n";
    std::ofstream(dir / "bad_value.cfg") << "[design]\ngamma_factor = 0.5\n";
  }
  for (const char* name : {"unknown.cfg", "missing.cfg", "bad_value.cfg"}) {
    INFO(name);
    CHECK(run_cli("design --config \"" + (dir / name).string() + "\" --out \"" + dir.string() + "\"") == 2);
  }
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("design --mode sideways") == 2);
}

TEST_CASE("synthetic envelope emits one plant file per point") {
  const fs::path out = scratch("model_syn");
  CHECK(cli::cmd_model(file_config("synthetic_envelope.cfg", out), sink) == cli::kExitOk);
  std::size_t plants = 0;
  for (const auto& e : fs::directory_iterator(out))
    if (e.path().filename().string().rfind("plant_", 0) == 0) ++plants;
  CHECK(plants == 4);
  const Json p = read_json(out / "plant_syn1.json");
  CHECK(p.contains("pitch_rate"));
  CHECK(p.contains("accel_per_pitch_rate"));
  CHECK(p["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("envelope of duplicated points") {
  const std::vector<double> factors{1.0, 1.0, 1.0};
  const fs::path out = scratch("dup");
  const cli::EnvelopeAnalysis a = cli::analyze_envelope(inline_config(envelope_text(factors), out));
  CHECK(a.nominal.index == 0);
  CHECK(a.nominal.worst_gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single-point envelope is trivially certified") {
  const std::vector<double> factors{1.0};
  const fs::path out = scratch("single");
  const cli::RunConfig cfg = inline_config(envelope_text(factors) + "\n[design]\nfit_order = 3\n", out);
  CHECK(cli::cmd_verify(cfg, sink) == cli::kExitOk);
  const Json v = read_json(out / "verify_report.json");
  CHECK(v["r_star"].get<double>() < 1e-9);
  CHECK(v["b_achieved"].get<double>() > 0.0);
  CHECK(v["verdict"] == "PASS");
}

TEST_CASE("synthetic nominal matches the brute-force min-max") {
  const cli::EnvelopeAnalysis a = cli::analyze_envelope(file_config("synthetic_envelope.cfg", scratch("nominal")));
  const auto& plants = a.family.plants;
  std::size_t best = 0;
  double best_gap = 2.0;
  for (std::size_t i = 0; i < plants.size(); ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < plants.size(); ++j)
      if (i != j) worst = std::max(worst, vgap::vgap_metric(plants[i], plants[j]).value);
    if (worst < best_gap - 1e-12) {
      best_gap = worst;
      best = i;
    }
  }
  CHECK(a.nominal.index == best);
  CHECK(a.nominal.worst_gap == doctest::Approx(best_gap).epsilon(1e-9));
}

TEST_CASE("verify on the synthetic and the inflated envelopes") {
  SUBCASE("certified envelope: every pole check agrees") {
    const cli::RunConfig cfg = file_config("synthetic_envelope.cfg", scratch("verify_syn"));
    const cli::DesignOutcome d = cli::run_design(cfg);
    const cli::VerifyReport v = cli::run_verify(cfg, d);
    CHECK(v.certified);
    CHECK(v.pass());
    CHECK_FALSE(v.disagreement);
    for (const auto& p : v.points) {
      INFO(p.id);
      CHECK(p.closed_loop_stable);
      CHECK(p.spectral_abscissa < 0.0);
      CHECK(p.shaped_gap < v.margin);
    }
  }
  SUBCASE("inflated envelope fails the certificate") {
    const cli::RunConfig cfg = file_config("inflated_envelope.cfg", scratch("verify_inf"));
    CHECK(cli::cmd_verify(cfg, sink) == cli::kExitVerificationFailed);
    const Json v = read_json(cfg.output_directory / "verify_report.json");
    CHECK(v["verdict"] == "FAIL");
    CHECK(v["r_star"].get<double>() > v["b_achieved"].get<double>());
    CHECK(v["disagreement"] == false);
  }
}

TEST_CASE("design reports are byte-identical for a fixed seed") {
  const std::string text = "[plant]\nsource = reference\n[design]\nmode = pso\n[pso]\nparticles = 12\niterations = 15\nseed = 9\n";
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  cli::RunConfig ca = inline_config(text, a), cb = inline_config(text, b);
  ca.threads = 1;
  cb.threads = 4;
  cli::cmd_design(ca, sink);
  cli::cmd_design(cb, sink);
  for (const char* f : {"design_report.json", "controller.json", "pso_history.csv", "bounds.csv"}) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const Json j = read_json(a / "design_report.json");
  CHECK(j["seed"] == 9);
  CHECK(j.contains("rolloff"));
  CHECK(j["rolloff"]["omega"] == 300.0);
  CHECK(j["rolloff"]["reduction_db"] == 25.0);

  cli::RunConfig other = inline_config(text, scratch("det_c"));
  other.design.swarm.seed = 10;
  cli::cmd_design(other, sink);
  CHECK(slurp(a / "pso_history.csv") != slurp(other.output_directory / "pso_history.csv"));
}

TEST_CASE("fit100 design on the reference plant") {
  const fs::path out = scratch("fit100");
  CHECK(cli::cmd_design(file_config("reference_fit100.txt", out), sink) == cli::kExitOk);
  const Json j = read_json(out / "design_report.json");
  CHECK(j["b_achieved"].get<double>() > 0.0);
  CHECK(j["b_achieved"].get<double>() <= j["b_opt"].get<double>() + 1e-6);
  CHECK(j["rolloff"]["pass"] == true);
  CHECK(j["stabilizing"] == true);
  CHECK(j["flag"] == "");
}

TEST_CASE("a design without a stabilizing candidate exits with status 3") {
  const std::string text =
      "[plant]\nsource = reference\n[design]\nmode = pso\ncontroller_numerator_degree = 0\n"
      "controller_denominator_degree = 1\ncontroller_coefficient_range = -10, -9\n[pso]\nparticles = 4\niterations = 2\n";
  const fs::path out = scratch("hopeless");
  CHECK(cli::cmd_design(inline_config(text, out), sink) == cli::kExitNoStabilizingCandidate);
  CHECK(read_json(out / "design_report.json")["flag"] == "no stabilizing candidate found");
}

TEST_CASE("simulate emits the four step metrics") {
  const fs::path out = scratch("simulate");
  const cli::RunConfig cfg = file_config("raised_bounds_fit100.txt", out);
  CHECK(cli::cmd_simulate(cfg, true, sink) == cli::kExitOk);
  const Json m = read_json(out / "metrics_reference.json");
  const Json& metrics = m["metrics"];
  REQUIRE(metrics.is_object());
  CHECK(metrics.size() == 4);
  for (const char* key : {"overshoot_time", "overshoot", "steady_state_error", "maximum_rate_of_angle_change"})
    CHECK(metrics.contains(key));
  CHECK(metrics["steady_state_error"].get<double>() < 0.02);
  CHECK(m["within_limits"] == true);
  const std::string csv = slurp(out / "step_reference.csv");
  CHECK(csv.rfind("t,", 0) == 0);
}

TEST_CASE("unsettled responses are flagged per point") {
  const fs::path out = scratch("unsettled");
  const cli::RunConfig cfg = file_config("reference_fit100.txt", out);
  CHECK(cli::cmd_simulate(cfg, true, sink) == cli::kExitVerificationFailed);
  const Json m = read_json(out / "metrics_reference.json");
  CHECK(m["metrics"].is_null());
  CHECK(m["flag"] == "steady state not reached");
}

TEST_CASE("simulation metrics are stable under dt halving") {
  cli::RunConfig cfg = file_config("raised_bounds_fit100.txt", scratch("dt"));
  const cli::DesignOutcome d = cli::run_design(cfg);
  const auto coarse = cli::run_simulation(cfg, d);
  cfg.simulation.dt /= 2.0;
  const auto fine = cli::run_simulation(cfg, d);
  REQUIRE(coarse.at(0).metrics);
  REQUIRE(fine.at(0).metrics);
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); };
  CHECK(rel(coarse[0].metrics->overshoot_time, fine[0].metrics->overshoot_time) < 0.01);
  CHECK(rel(coarse[0].metrics->max_rate, fine[0].metrics->max_rate) < 0.01);
  CHECK(std::abs(coarse[0].metrics->steady_state_error - fine[0].metrics->steady_state_error) < 0.01);
}

TEST_CASE("config hash follows the bytes") {
  const cli::RunConfig a = cli::parse_run_config("[design]\nfit_order = 3\n");
  const cli::RunConfig b = cli::parse_run_config("[design]\nfit_order = 4\n");
  CHECK(a.hash != b.hash);
  CHECK(a.hash == cli::parse_run_config("[design]\nfit_order = 3\n").hash);
}

TEST_CASE("factored form") {
  CHECK(cli::factored_form(lti::TransferFunction({2.0, -2.0}, {1.0, 7.0, 12.0})) == "2(s-1)/((s+4)(s+3))");
  CHECK(cli::factored_form(lti::TransferFunction({1.0}, {1.0, 2.0, 5.0})) == "1/(s^2+2s+5)");
  CHECK(cli::factored_form(lti::TransferFunction::gain(3.0)) == "3");
}
