#include "qpronto/run_io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qpronto {

namespace {

namespace fs = std::filesystem;

// Shortest round-trip decimal form; deterministic for identical doubles.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* step_kind_name(StepKind kind) {
  return kind == StepKind::Newton ? "newton" : "quasi_newton";
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::MaxIters:
      return "MaxIters";
    case Termination::LineSearchStalled:
      return "LineSearchStalled";
  }
  return "unknown";
}

void atomic_write(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string iteration_row(const IterationRecord& rec) {
  std::ostringstream row;
  row << rec.index << ',' << format_double(rec.cost) << ',' << format_double(rec.dg)
      << ',' << format_double(rec.gamma) << ',' << step_kind_name(rec.step_kind) << ','
      << rec.backtracks << ',' << format_double(rec.infidelity);
  return row.str();
}

}  // namespace

std::string trajectory_csv_header(int dimension, int channels) {
  std::ostringstream header;
  header << "t";
  for (int j = 1; j <= channels; ++j) header << ",u" << j;
  for (int i = 0; i < dimension; ++i) header << ",pop" << i;
  for (int i = 0; i < 2 * dimension; ++i) header << ",x" << i;
  return header.str();
}

RunResult run_problem(const ProblemConfig& config, const fs::path& out_dir,
                      bool quiet) {
  fs::create_directories(out_dir);

  const TimeGrid grid = build_grid(config);
  const QuantumSystem sys = build_system(config);
  const CostSpec spec = build_cost(config);
  const RealState x0 = build_initial_state(config);
  const VectorSignal guess = build_initial_guess(config, grid);

  std::ostringstream iterations;
  iterations << kIterationsCsvHeader << "\n";
  IterationObserver observer = [&](const IterationRecord& rec) {
    iterations << iteration_row(rec) << "\n";
    if (!quiet) {
      std::cout << "iter " << rec.index << ": cost = " << rec.cost
                << ", -Dg = " << -rec.dg << ", gamma = " << rec.gamma << " ("
                << step_kind_name(rec.step_kind) << ", " << rec.backtracks
                << " backtracks)\n";
    }
  };

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.report = solve(sys, spec, x0, guess, config.solver, observer);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.outputs.iterations_csv = out_dir / "iterations.csv";
  atomic_write(result.outputs.iterations_csv, iterations.str());

  const Trajectory& traj = result.report.final_trajectory;
  const int n = config.dimension;
  const int m = static_cast<int>(config.controls.size());
  std::ostringstream traj_csv;
  traj_csv << trajectory_csv_header(n, m) << "\n";
  for (int k = 0; k <= grid.steps; ++k) {
    traj_csv << format_double(grid.node(k));
    const Eigen::VectorXd& u = traj.controls.values[k];
    for (int j = 0; j < m; ++j) traj_csv << ',' << format_double(u[j]);
    const Eigen::VectorXd& x = traj.states.values[k];
    for (int i = 0; i < n; ++i) {
      const double pop = x[i] * x[i] + x[n + i] * x[n + i];
      traj_csv << ',' << format_double(pop);
    }
    for (int i = 0; i < 2 * n; ++i) traj_csv << ',' << format_double(x[i]);
    traj_csv << "\n";
  }
  result.outputs.trajectory_csv = out_dir / "trajectory.csv";
  atomic_write(result.outputs.trajectory_csv, traj_csv.str());

  const double final_infidelity =
      target_infidelity(config, traj.states.values.back());
  std::ostringstream report_txt;
  report_txt << "termination: " << termination_name(result.report.termination) << "\n";
  report_txt << "converged: " << (result.report.converged ? "true" : "false") << "\n";
  report_txt << "iterations: " << result.report.iterations.size() << "\n";
  report_txt << "final_cost: " << format_double(result.report.final_cost) << "\n";
  report_txt << "final_infidelity: " << format_double(final_infidelity) << "\n";
  report_txt << "wall_time_seconds: " << format_double(result.wall_seconds) << "\n";
  result.outputs.report_txt = out_dir / "report.txt";
  atomic_write(result.outputs.report_txt, report_txt.str());

  result.outputs.effective_config_json = out_dir / "effective_config.json";
  atomic_write(result.outputs.effective_config_json, config_to_json(config));

  if (!quiet) {
    std::cout << "termination: " << termination_name(result.report.termination)
              << ", final cost " << result.report.final_cost << ", final infidelity "
              << final_infidelity << "\n";
    std::cout << "outputs written to " << out_dir.string() << "\n";
  }
  return result;
}

int exit_code_for(Termination termination) {
  switch (termination) {
    case Termination::Converged:
      return 0;
    case Termination::MaxIters:
      return 2;
    case Termination::LineSearchStalled:
      return 3;
  }
  return 1;
}

}  // namespace qpronto
