#pragma once

#include <filesystem>

#include "qpronto/config.hpp"

namespace qpronto {

/// Files produced by a solver run. All are written atomically
/// (temporary file plus rename) and are deterministic for a fixed config.
struct RunOutputs {
  std::filesystem::path iterations_csv;
  std::filesystem::path trajectory_csv;
  std::filesystem::path report_txt;
  std::filesystem::path effective_config_json;
};

struct RunResult {
  SolveReport report;
  RunOutputs outputs;
  double wall_seconds = 0.0;
};

inline constexpr const char* kIterationsCsvHeader =
    "index,cost,Dg,gamma,step_kind,backtracks,infidelity";

/// Header of the trajectory CSV for n levels and m channels:
/// t, u1..um, pop0..pop{n-1}, x0..x{2n-1}.
std::string trajectory_csv_header(int dimension, int channels);

/// Runs the solver on the config and writes the result files into out_dir
/// (created if missing). Progress lines go to stdout unless quiet.
RunResult run_problem(const ProblemConfig& config,
                      const std::filesystem::path& out_dir, bool quiet = false);

/// Stable process exit code for a termination status. Converged is 0,
/// MaxIters 2, LineSearchStalled 3 (4 is reserved for config errors).
int exit_code_for(Termination termination);

}  // namespace qpronto
