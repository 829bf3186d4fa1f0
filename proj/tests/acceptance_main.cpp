// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "qpronto/config.hpp"
#include "qpronto/run_io.hpp"
#include "support/oracles.hpp"

using namespace qpronto;
using namespace qpronto::testing;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Problem {
  ProblemConfig config;
  TimeGrid grid;
  QuantumSystem sys;
  CostSpec spec;
  RealState x0;
  VectorSignal guess;
};

Problem make_problem(const ProblemConfig& config) {
  Problem p{config, build_grid(config), build_system(config), build_cost(config),
            build_initial_state(config), {}};
  p.guess = build_initial_guess(p.config, p.grid);
  return p;
}

// Frozen regression baselines from the first recorded converged run of the
// benchmark preset at N = 5000 (grid and solver parameters as shipped).
const std::vector<double> kBaselineDgSequence = {
    -0.16943836389637421, -0.027158086150496204, -0.01663843869733251,
    -0.0044077348407735341};
const double kBaselineFinalInfidelity = 0.52492089051272806;
const double kBaselineRelTol = 1e-6;

}  // namespace

int main() {
  std::printf("acceptance suite: qubit_pi_pulse benchmark and numerical oracles\n");

  const ProblemConfig preset = parse_config(preset_text("qubit_pi_pulse"), "preset");
  Problem bench = make_problem(preset);

  // One shared benchmark run.
  const SolveReport run = solve(bench.sys, bench.spec, bench.x0, bench.guess,
                                bench.config.solver);

  // 1. Convergence within five outer iterations.
  report(1, "benchmark converges within 5 outer iterations",
         run.converged && run.iterations.size() <= 5,
         "termination=" + std::string(run.converged ? "Converged" : "other") +
             ", iterations=" + std::to_string(run.iterations.size()));

  // 2. Strictly monotone cost across consecutive records.
  {
    bool monotone = true;
    for (std::size_t k = 1; k < run.iterations.size(); ++k)
      monotone = monotone && (run.iterations[k].cost < run.iterations[k - 1].cost);
    std::string costs;
    for (const auto& rec : run.iterations) costs += fmt(rec.cost) + " ";
    report(2, "monotonic descent, strict inequality", monotone, "costs: " + costs);
  }

  // 3. Quadratic-convergence probe: s_{k+1} <= C s_k^2 with C fit from the
  //    first transition, plus the frozen regression baseline of the s_k run.
  {
    std::vector<double> s;
    for (const auto& rec : run.iterations) s.push_back(-rec.dg);
    bool ratio_ok = s.size() >= 2;
    std::string detail = "s:";
    for (double v : s) detail += " " + fmt(v);
    if (s.size() >= 2) {
      const double C = s[1] / (s[0] * s[0]);
      detail += ", C=" + fmt(C);
      for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        if (!(s[k + 1] <= C * s[k] * s[k])) {
          ratio_ok = false;
          detail += ", violated at k=" + std::to_string(k) + " (" + fmt(s[k + 1]) +
                    " > " + fmt(C * s[k] * s[k]) + ")";
          break;
        }
      }
    }
    bool baseline_ok = run.iterations.size() == kBaselineDgSequence.size();
    if (baseline_ok) {
      for (std::size_t k = 0; k < kBaselineDgSequence.size(); ++k) {
        const double rel = std::abs(run.iterations[k].dg - kBaselineDgSequence[k]) /
                           std::abs(kBaselineDgSequence[k]);
        baseline_ok = baseline_ok && rel <= kBaselineRelTol;
      }
    }
    detail += baseline_ok ? ", baseline ok" : ", baseline drifted";
    report(3, "quadratic-rate ratio test on -Dg", ratio_ok && baseline_ok, detail);
  }

  // 4. Bounded optimal pulse.
  {
    double peak = 0.0;
    for (const auto& u : run.final_trajectory.controls.values)
      peak = std::max(peak, u.cwiseAbs().maxCoeff());
    report(4, "optimal pulse bounded by 1", peak <= 1.0, "max|u|=" + fmt(peak));
  }

  // 5. Gradient oracle on the first iterate, epsilon 1e-5, relative 1e-4.
  {
    const Trajectory xi = project(bench.sys, bench.x0, bench.guess);
    DescentResult dir;
    try {
      const Costate chi = solve_costate(bench.sys, bench.spec, xi);
      const LqCoefficients co = linearize(bench.sys, bench.spec, xi, &chi, DescentMode::Newton);
      dir = descend(co, solve_riccati(co, bench.grid), bench.grid);
    } catch (const RiccatiFailure&) {
      const LqCoefficients co =
          linearize(bench.sys, bench.spec, xi, nullptr, DescentMode::QuasiNewton);
      dir = descend(co, solve_riccati(co, bench.grid), bench.grid);
    }
    const double fd =
        directional_derivative_fd(bench.sys, bench.spec, bench.x0, bench.guess, dir.nu, 1e-5);
    const double rel = std::abs(dir.dg - fd) / std::abs(fd);
    report(5, "directional derivative matches finite differences", rel <= 1e-4,
           "Dg=" + fmt(dir.dg) + ", fd=" + fmt(fd) + ", rel=" + fmt(rel));
  }

  // 6. Scalar Riccati analytic oracle, sup error 1e-8 at dt 1e-3.
  {
    const TimeGrid grid = TimeGrid::uniform(5.0, 5000);
    auto mat = [&](double v) { return Eigen::MatrixXd::Constant(1, 1, v); };
    LqCoefficients co;
    co.A = MatrixSignal::constant(grid, mat(0.0));
    co.B = MatrixSignal::constant(grid, mat(1.0));
    co.Q = MatrixSignal::constant(grid, mat(1.0));
    co.R = MatrixSignal::constant(grid, mat(1.0));
    co.S = MatrixSignal::constant(grid, mat(0.0));
    co.q = VectorSignal::constant(grid, Eigen::VectorXd::Zero(1));
    co.r = VectorSignal::constant(grid, Eigen::VectorXd::Zero(1));
    co.Pi = mat(0.0);
    co.pi = Eigen::VectorXd::Zero(1);
    const RiccatiSolution sol = solve_riccati(co, grid);
    double worst = 0.0;
    for (int k = 0; k <= grid.steps; ++k)
      worst = std::max(worst,
                       std::abs(sol.P.values[k](0, 0) - std::tanh(5.0 - grid.node(k))));
    report(6, "scalar Riccati reproduces tanh(T-t)", worst <= 1e-8,
           "sup err=" + fmt(worst));
  }

  // 7. Dense-QP oracle on a 16-step grid, relative sup norm 1e-3.
  {
    const TimeGrid grid = TimeGrid::uniform(1.0, 16);
    const LqCoefficients co = boundary_flat_instance(grid);
    const DescentResult res = descend(co, solve_riccati(co, grid), grid);
    const QpOracleSolution qp = solve_lq_qp(co, grid);
    double peak = 0.0, err = 0.0;
    for (int k = 0; k <= grid.steps; ++k) {
      peak = std::max(peak, qp.nu[k].norm());
      err = std::max(err, (qp.nu[k] - res.nu.values[k]).norm());
    }
    report(7, "descent direction matches the dense QP oracle", err / peak <= 1e-3,
           "rel sup err=" + fmt(err / peak));
  }

  // 8. Norm conservation of the projected trajectory.
  {
    const Trajectory xi = project(bench.sys, bench.x0, bench.guess);
    double worst = 0.0;
    for (const auto& x : xi.states.values)
      worst = std::max(worst, std::abs(x.norm() - 1.0));
    report(8, "projected trajectory preserves the norm", worst <= 1e-8,
           "max | ||x|| - 1 |=" + fmt(worst));
  }

  // 9. Fallback path: a cubic coupling with a hot start must fail the Newton
  //    Riccati solve at least once and still produce a monotone terminating
  //    run; separately, the benchmark's own steps are checked against the
  //    published all-Newton behavior.
  {
    ProblemConfig cubic = preset;
    cubic.name = "cubic_fallback";
    cubic.controls[0].coupling.kind = CouplingKind::Polynomial;
    cubic.controls[0].coupling.coefficients = {0.0, 0.0, 0.0, 1.0};
    cubic.horizon = 2.0;
    cubic.grid_steps = 6000;
    cubic.input_weight = SignalDesc{SignalKind::Constant, 1.0, 0.0, 0.0, {}, {}};
    cubic.initial_guess = SignalDesc{SignalKind::Constant, 0.8, 0.0, 0.0, {}, {}};
    cubic.solver.grid = TimeGrid::uniform(2.0, 6000);
    cubic.solver.max_iters = 60;
    Problem p = make_problem(cubic);

    bool newton_failed_directly = false;
    try {
      const Trajectory xi = project(p.sys, p.x0, p.guess);
      const Costate chi = solve_costate(p.sys, p.spec, xi);
      const LqCoefficients co = linearize(p.sys, p.spec, xi, &chi, DescentMode::Newton);
      solve_riccati(co, p.grid);
    } catch (const RiccatiFailure&) {
      newton_failed_directly = true;
    }

    const SolveReport fallback_run = solve(p.sys, p.spec, p.x0, p.guess, p.config.solver);
    int fallbacks = 0;
    for (const auto& rec : fallback_run.iterations)
      if (rec.step_kind == StepKind::QuasiNewton) ++fallbacks;
    bool monotone = true;
    for (std::size_t k = 1; k < fallback_run.iterations.size(); ++k)
      monotone = monotone &&
                 (fallback_run.iterations[k].cost < fallback_run.iterations[k - 1].cost);
    const bool terminated = fallback_run.converged ||
                            fallback_run.termination == Termination::MaxIters;
    const bool constructed_ok =
        newton_failed_directly && fallbacks >= 1 && monotone && terminated;

    int bench_newton = 0;
    for (const auto& rec : run.iterations)
      if (rec.step_kind == StepKind::Newton) ++bench_newton;
    const bool all_newton = bench_newton == static_cast<int>(run.iterations.size());

    report(9, "quasi-Newton fallback path",
           constructed_ok && all_newton,
           std::string("cubic instance: RiccatiFailure=") +
               (newton_failed_directly ? "yes" : "no") + ", fallbacks=" +
               std::to_string(fallbacks) + ", monotone=" + (monotone ? "yes" : "no") +
               "; benchmark Newton steps=" + std::to_string(bench_newton) + "/" +
               std::to_string(run.iterations.size()));
  }

  // 10. Final infidelity at convergence, with its frozen regression value.
  {
    const double infid =
        target_infidelity(bench.config, run.final_trajectory.states.values.back());
    const double rel = std::abs(infid - kBaselineFinalInfidelity) /
                       std::abs(kBaselineFinalInfidelity);
    report(10, "final infidelity below 1e-2",
           infid < 1e-2 && rel <= kBaselineRelTol,
           "infidelity=" + fmt(infid) + ", baseline rel drift=" + fmt(rel));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
