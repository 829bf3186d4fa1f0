#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qpronto/run_io.hpp"

namespace {

constexpr int kConfigErrorExit = 4;

qpronto::ProblemConfig load_from_options(const std::string& config_path,
                                         const std::string& preset) {
  if (!preset.empty())
    return qpronto::parse_config(qpronto::preset_text(preset), "preset:" + preset);
  return qpronto::load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpronto: projection-operator Newton solver for quantum optimal control"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir = "qpronto_out";
  double tol_override = 0.0;
  int grid_override = 0;
  bool quiet = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Solve a problem and write result files");
  auto* run_config = run_cmd->add_option("--config", config_path, "Problem config file (JSON)");
  auto* run_preset = run_cmd->add_option("--preset", preset, "Built-in preset name");
  run_cmd->add_option("--out", out_dir, "Output directory");
  auto* tol_opt = run_cmd->add_option("--tol", tol_override, "Override solver exit tolerance");
  auto* grid_opt = run_cmd->add_option("--grid", grid_override, "Override grid step count");
  run_cmd->add_flag("--quiet", quiet, "Suppress progress output");
  run_config->excludes(run_preset);

  CLI::App* describe_cmd = app.add_subcommand("describe", "Print a summary of a config");
  auto* desc_config = describe_cmd->add_option("--config", config_path, "Problem config file (JSON)");
  auto* desc_preset = describe_cmd->add_option("--preset", preset, "Built-in preset name");
  desc_config->excludes(desc_preset);

  CLI::App* presets_cmd = app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigErrorExit;
  }

  try {
    if (presets_cmd->parsed()) {
      for (const std::string& name : qpronto::preset_names()) std::cout << name << "\n";
      return 0;
    }

    if (config_path.empty() && preset.empty()) {
      std::cerr << "error: one of --config or --preset is required\n";
      return kConfigErrorExit;
    }
    qpronto::ProblemConfig config = load_from_options(config_path, preset);

    if (describe_cmd->parsed()) {
      std::cout << qpronto::describe(config);
      return 0;
    }

    // run: apply overrides, then re-validate the effective values.
    if (*tol_opt) {
      if (!(tol_override > 0.0)) {
        std::cerr << "error: --tol must be positive\n";
        return kConfigErrorExit;
      }
      config.solver.tol = tol_override;
    }
    if (*grid_opt) {
      if (grid_override < 2 || grid_override % 2 != 0) {
        std::cerr << "error: --grid must be an even integer of at least 2\n";
        return kConfigErrorExit;
      }
      config.grid_steps = grid_override;
      config.solver.grid = qpronto::TimeGrid::uniform(config.horizon, grid_override);
    }

    const qpronto::RunResult result =
        qpronto::run_problem(config, std::filesystem::path(out_dir), quiet);
    return qpronto::exit_code_for(result.report.termination);
  } catch (const qpronto::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
