#include "autopilot/cli/commands.hpp"
#include "autopilot/io/structured_text.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace autopilot;

int main(int argc, char** argv) {
  CLI::App app{"Loop-shaping autopilot design over a flight envelope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kToolVersion);

  std::string config_path, mode, out_dir;
  std::optional<std::uint64_t> seed;
  bool table1_check = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "structured text run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "PSO seed");
    sub->add_option("--mode", mode, "design workflow")->check(CLI::IsMember({"pso", "fit100"}));
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* model = app.add_subcommand("model", "emit plant transfer functions");
  CLI::App* envelope = app.add_subcommand("envelope", "v-gap matrix and nominal selection");
  CLI::App* design = app.add_subcommand("design", "shape the nominal plant and synthesize the controller");
  CLI::App* verify = app.add_subcommand("verify", "certify the controller over the envelope");
  CLI::App* simulate = app.add_subcommand("simulate", "closed-loop step responses");
  for (CLI::App* sub : {model, envelope, design, verify, simulate}) add_common(sub);
  simulate->add_flag("--table1-check", table1_check, "compare metrics with the step-response limits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  try {
    cli::RunConfig cfg = config_path.empty() ? cli::parse_run_config("", "<defaults>") : cli::load_run_config(config_path);
    if (seed) cfg.design.swarm.seed = *seed;
    if (!mode.empty()) cfg.mode = cli::parse_mode(mode);
    if (!out_dir.empty()) cfg.output_directory = out_dir;

    if (model->parsed()) return cli::cmd_model(cfg, std::cout);
    if (envelope->parsed()) return cli::cmd_envelope(cfg, std::cout);
    if (design->parsed()) return cli::cmd_design(cfg, std::cout);
    if (verify->parsed()) return cli::cmd_verify(cfg, std::cout);
    return cli::cmd_simulate(cfg, table1_check, std::cout);
  } catch (const io::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
