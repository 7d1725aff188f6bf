// lcmanifold: limit-cycle manifold reduction toolkit.
//
// Subcommands: manifold | simulate | analyze | verify | sweep.
// A JSON config file supplies the system, integrator, analysis and output
// blocks; command-line flags override individual fields.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lcmanifold/commands.hpp"
#include "lcmanifold/config.hpp"
#include "lcmanifold/verify.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;

  lcm::RunConfig load() const {
    lcm::RunConfig cfg;
    if (!config_path.empty()) cfg = lcm::load_config(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file ('-' for stdin)");
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limit-cycle manifold reduction toolkit"};
  app.require_subcommand(1);

  CommonArgs manifold_args, simulate_args, analyze_args, verify_args, sweep_args;
  std::string simulate_target = "reduced2d";
  std::string analyze_target = "reduced2d";
  std::string analyze_input;
  lcm::SweepRange sweep_range;
  bool debug_doubled_denominator = false;

  CLI::App* cmd_man = app.add_subcommand("manifold", "solve the order-2 invariant surface");
  add_common(cmd_man, manifold_args);

  CLI::App* cmd_sim = app.add_subcommand("simulate", "integrate a system and emit CSV");
  add_common(cmd_sim, simulate_args);
  cmd_sim->add_option("--target", simulate_target, "full3d|reduced2d|polar");

  CLI::App* cmd_ana = app.add_subcommand("analyze", "measure limit-cycle statistics");
  add_common(cmd_ana, analyze_args);
  cmd_ana->add_option("--target", analyze_target, "full3d|reduced2d|polar");
  cmd_ana->add_option("--input", analyze_input, "trajectory CSV (otherwise simulate)");

  CLI::App* cmd_ver = app.add_subcommand("verify", "run the verification battery");
  add_common(cmd_ver, verify_args);
  cmd_ver->add_flag("--debug-doubled-denominator", debug_doubled_denominator)
      ->group("");  // fault-injection hook, hidden from help

  CLI::App* cmd_swp = app.add_subcommand("sweep", "predicted vs simulated radius over lambda");
  add_common(cmd_swp, sweep_args);
  cmd_swp->add_option("--lambda-min", sweep_range.lambda_min, "lowest lambda");
  cmd_swp->add_option("--lambda-max", sweep_range.lambda_max, "highest lambda");
  cmd_swp->add_option("--lambda-steps", sweep_range.steps, "number of rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_man->parsed()) return lcm::cmd_manifold(manifold_args.load(), std::cout);
    if (cmd_sim->parsed())
      return lcm::cmd_simulate(simulate_args.load(), lcm::parse_target(simulate_target),
                               std::cout);
    if (cmd_ana->parsed()) {
      std::optional<std::string> input;
      if (!analyze_input.empty()) input = analyze_input;
      return lcm::cmd_analyze(analyze_args.load(), input, lcm::parse_target(analyze_target),
                              std::cout);
    }
    if (cmd_ver->parsed()) {
      lcm::VerifyOptions opts;
      if (debug_doubled_denominator) opts.denominator_scale = 2.0;
      return lcm::cmd_verify(verify_args.load(), opts, std::cout);
    }
    if (cmd_swp->parsed()) return lcm::cmd_sweep(sweep_args.load(), sweep_range, std::cout);
  } catch (const lcm::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return lcm::exit_config_invalid;
  } catch (const lcm::DomainError& err) {
    std::cerr << "domain error: " << err.what() << "\n";
    return lcm::exit_config_invalid;
  } catch (const lcm::SingularSystemError& err) {
    std::cerr << "singular system: " << err.what() << "\n";
    return lcm::exit_singular_system;
  } catch (const lcm::IntegrationError& err) {
    std::cerr << "integration failed: " << err.what()
              << " (last good time " << lcm::format_double(err.last_good_time()) << ")\n";
    return lcm::exit_integration_failed;
  } catch (const lcm::InsufficientDataError& err) {
    std::cerr << "insufficient data: " << err.what() << "\n";
    return lcm::exit_insufficient_data;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return lcm::exit_config_invalid;
  }
  return lcm::exit_ok;
}
