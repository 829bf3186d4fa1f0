#include <doctest.h>

#include <cmath>

#include "qpronto/config.hpp"
#include "qpronto/solver.hpp"

using namespace qpronto;

namespace {

struct Benchmark {
  ProblemConfig config;
  TimeGrid grid;
  QuantumSystem sys;
  CostSpec spec;
  RealState x0;
  VectorSignal guess;
};

Benchmark load_benchmark(int steps = 0) {
  Benchmark b{parse_config(preset_text("qubit_pi_pulse"), "preset"), {}, {}, {}, {}, {}};
  if (steps > 0) {
    b.config.grid_steps = steps;
    b.config.solver.grid = TimeGrid::uniform(b.config.horizon, steps);
  }
  b.grid = build_grid(b.config);
  b.sys = build_system(b.config);
  b.spec = build_cost(b.config);
  b.x0 = build_initial_state(b.config);
  b.guess = build_initial_guess(b.config, b.grid);
  return b;
}

// Qubit with a cubic coupling and an aggressive guess; the costate curvature
// then dominates the input weight and the Newton Riccati solve must fail.
// The fine grid keeps the strongly driven closed-loop solves non-stiff for
// the fixed-step integrator.
Benchmark cubic_instance() {
  Benchmark b = load_benchmark();
  b.config.name = "cubic_fallback";
  b.config.controls[0].coupling.kind = CouplingKind::Polynomial;
  b.config.controls[0].coupling.coefficients = {0.0, 0.0, 0.0, 1.0};
  b.config.horizon = 2.0;
  b.config.grid_steps = 6000;
  b.config.input_weight = SignalDesc{SignalKind::Constant, 1.0, 0.0, 0.0, {}, {}};
  b.config.initial_guess = SignalDesc{SignalKind::Constant, 0.8, 0.0, 0.0, {}, {}};
  b.config.solver.grid = TimeGrid::uniform(2.0, 6000);
  b.grid = build_grid(b.config);
  b.sys = build_system(b.config);
  b.spec = build_cost(b.config);
  b.x0 = build_initial_state(b.config);
  b.guess = build_initial_guess(b.config, b.grid);
  return b;
}

}  // namespace

TEST_CASE("config validation ranges") {
  SolverConfig cfg;
  cfg.grid = TimeGrid::uniform(1.0, 10);
  CHECK_NOTHROW(validate_config(cfg));
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg.alpha = 0.4;
  cfg.beta = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg.beta = 0.7;
  cfg.grid = TimeGrid{1.0, 11};  // odd step count breaks the quadrature
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("cap_step bound") {
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  VectorSignal z = VectorSignal::constant(grid, Eigen::VectorXd::Zero(2));
  CHECK(cap_step(z, 1.0, 0.6) == 1.0);

  z.values[2] = Eigen::VectorXd::Constant(2, 1.2 / std::sqrt(2.0));  // norm 1.2
  CHECK(cap_step(z, 1.0, 0.6) == doctest::Approx(0.5).epsilon(1e-12));

  z.values[2] = Eigen::VectorXd::Constant(2, 0.3 / std::sqrt(2.0));  // norm 0.3
  CHECK(cap_step(z, 1.0, 0.6) == 1.0);
}

TEST_CASE("armijo acceptance and backtracking") {
  SolverConfig cfg;
  cfg.alpha = 0.4;
  cfg.beta = 0.7;
  cfg.max_backtracks = 40;

  // Exactly quadratic cost with the minimum at gamma = 1: accepted at once,
  // since alpha < 1/2.
  const double g0 = 2.0, dg = -1.0;
  auto quadratic = [&](double gamma) { return g0 + dg * gamma + 0.5 * gamma * gamma; };
  ArmijoResult res = armijo_search(g0, dg, 1.0, quadratic, cfg);
  CHECK(res.accepted);
  CHECK(res.gamma == 1.0);
  CHECK(res.backtracks == 0);

  // A flat cost can never satisfy sufficient decrease.
  auto flat = [&](double) { return g0; };
  res = armijo_search(g0, dg, 1.0, flat, cfg);
  CHECK_FALSE(res.accepted);
  CHECK(res.backtracks == cfg.max_backtracks);

  // Acceptance on the third candidate: gamma = 1, 0.7, then 0.49.
  auto structured = [&](double gamma) {
    return gamma > 0.5 ? g0 + 1.0 : g0 + cfg.alpha * gamma * dg - 0.01;
  };
  res = armijo_search(g0, dg, 1.0, structured, cfg);
  CHECK(res.accepted);
  CHECK(res.gamma == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(res.backtracks == 2);

  CHECK_THROWS_AS(armijo_search(g0, 0.0, 1.0, quadratic, cfg), std::invalid_argument);
}

TEST_CASE("benchmark solve: monotone descent and exit condition") {
  Benchmark b = load_benchmark();
  int observed = 0;
  const SolveReport report = solve(b.sys, b.spec, b.x0, b.guess, b.config.solver,
                                   [&observed](const IterationRecord&) { ++observed; });

  CHECK(report.converged);
  CHECK(report.termination == Termination::Converged);
  CHECK(observed == static_cast<int>(report.iterations.size()));
  REQUIRE(!report.iterations.empty());

  for (std::size_t k = 1; k < report.iterations.size(); ++k)
    CHECK(report.iterations[k].cost < report.iterations[k - 1].cost);

  CHECK(-report.iterations.back().dg <= b.config.solver.tol);
  for (std::size_t k = 0; k + 1 < report.iterations.size(); ++k)
    CHECK(-report.iterations[k].dg > b.config.solver.tol);

  // Quasi-Newton directions always descend.
  for (const auto& rec : report.iterations)
    if (rec.step_kind == StepKind::QuasiNewton) CHECK(rec.dg <= 0.0);

  // The projected final trajectory stays on the sphere.
  for (const auto& x : report.final_trajectory.states.values)
    CHECK(std::abs(x.norm() - 1.0) <= 1e-8);
}

TEST_CASE("re-solving from a converged control is a fixed point") {
  Benchmark b = load_benchmark(1000);
  const SolveReport first = solve(b.sys, b.spec, b.x0, b.guess, b.config.solver);
  REQUIRE(first.converged);

  const SolveReport again =
      solve(b.sys, b.spec, b.x0, first.final_trajectory.controls, b.config.solver);
  CHECK(again.converged);
  CHECK(again.iterations.size() <= 1);
  CHECK(again.iterations.back().gamma == 0.0);
}

TEST_CASE("a generous tolerance converges without stepping") {
  Benchmark b = load_benchmark(500);
  SolverConfig cfg = b.config.solver;
  cfg.tol = 10.0;
  const SolveReport report = solve(b.sys, b.spec, b.x0, b.guess, cfg);
  CHECK(report.converged);
  CHECK(report.iterations.size() == 1);
  CHECK(report.final_cost == doctest::Approx(report.iterations[0].cost));
}

TEST_CASE("initial control is resampled onto the solver grid") {
  Benchmark b = load_benchmark(1000);
  // Guess tabulated on a coarser grid than the solve.
  const TimeGrid coarse = TimeGrid::uniform(5.0, 250);
  const VectorSignal coarse_guess = build_initial_guess(b.config, coarse);
  const SolveReport report = solve(b.sys, b.spec, b.x0, coarse_guess, b.config.solver);
  CHECK(report.final_trajectory.grid().steps == 1000);
  CHECK(report.converged);
}

TEST_CASE("cubic coupling with a hot start exercises the fallback branch") {
  Benchmark b = cubic_instance();
  SolverConfig cfg = b.config.solver;
  cfg.max_iters = 60;
  const SolveReport report = solve(b.sys, b.spec, b.x0, b.guess, cfg);

  // The Newton model must have failed at least once, completing the same
  // iteration as quasi-Newton instead.
  int fallbacks = 0;
  for (const auto& rec : report.iterations)
    if (rec.step_kind == StepKind::QuasiNewton) ++fallbacks;
  CHECK(fallbacks >= 1);

  for (const auto& rec : report.iterations)
    if (rec.step_kind == StepKind::QuasiNewton) CHECK(rec.dg <= 0.0);

  for (std::size_t k = 1; k < report.iterations.size(); ++k)
    CHECK(report.iterations[k].cost < report.iterations[k - 1].cost);

  CHECK((report.termination == Termination::Converged ||
         report.termination == Termination::MaxIters));
}

TEST_CASE("cost spec invariants are enforced at the solver boundary") {
  Benchmark b = load_benchmark(100);

  CostSpec indefinite = b.spec;
  indefinite.state_penalty = -Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(solve(b.sys, indefinite, b.x0, b.guess, b.config.solver),
                  std::invalid_argument);

  CostSpec bad_weight = b.spec;
  bad_weight.input_weight = [](double) { return Eigen::MatrixXd::Zero(1, 1); };
  CHECK_THROWS_AS(solve(b.sys, bad_weight, b.x0, b.guess, b.config.solver),
                  std::invalid_argument);
}

TEST_CASE("budget exhaustion is reported, not thrown") {
  Benchmark b = load_benchmark(500);
  SolverConfig cfg = b.config.solver;
  cfg.max_iters = 1;
  cfg.tol = 1e-12;
  const SolveReport report = solve(b.sys, b.spec, b.x0, b.guess, cfg);
  CHECK_FALSE(report.converged);
  CHECK(report.termination == Termination::MaxIters);
  CHECK(report.iterations.size() == 1);
}
