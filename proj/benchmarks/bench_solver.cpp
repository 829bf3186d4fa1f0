#include <benchmark/benchmark.h>

#include "qpronto/config.hpp"
#include "qpronto/run_io.hpp"

using namespace qpronto;

namespace {

struct Fixture {
  ProblemConfig config;
  TimeGrid grid;
  QuantumSystem sys;
  CostSpec spec;
  RealState x0;
  VectorSignal guess;

  explicit Fixture(int steps) {
    config = parse_config(preset_text("qubit_pi_pulse"), "preset");
    config.grid_steps = steps;
    config.solver.grid = TimeGrid::uniform(config.horizon, steps);
    grid = build_grid(config);
    sys = build_system(config);
    spec = build_cost(config);
    x0 = build_initial_state(config);
    guess = build_initial_guess(config, grid);
  }
};

}  // namespace

static void BM_Project(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const Trajectory traj = project(f.sys, f.x0, f.guess);
    benchmark::DoNotOptimize(traj.states.values.back());
  }
}
BENCHMARK(BM_Project)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_CostateBackward(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const Trajectory traj = project(f.sys, f.x0, f.guess);
  for (auto _ : state) {
    const Costate chi = solve_costate(f.sys, f.spec, traj);
    benchmark::DoNotOptimize(chi.chi.values.front());
  }
}
BENCHMARK(BM_CostateBackward)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_RiccatiBackward(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const Trajectory traj = project(f.sys, f.x0, f.guess);
  const LqCoefficients co = linearize(f.sys, f.spec, traj, nullptr, DescentMode::QuasiNewton);
  for (auto _ : state) {
    const RiccatiSolution sol = solve_riccati(co, f.grid);
    benchmark::DoNotOptimize(sol.gain.values.front());
  }
}
BENCHMARK(BM_RiccatiBackward)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_FullSolve(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const SolveReport report = solve(f.sys, f.spec, f.x0, f.guess, f.config.solver);
    benchmark::DoNotOptimize(report.final_cost);
  }
}
BENCHMARK(BM_FullSolve)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
