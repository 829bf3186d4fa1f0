#include "qpronto/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace qpronto {

namespace {

double infidelity_of(const CostSpec& spec, const Trajectory& traj) {
  const Eigen::VectorXd& xT = traj.states.values.back();
  return xT.dot(spec.terminal_penalty * xT);
}

// Penalties must be symmetric positive semidefinite and the input weight
// positive definite at every node.
void validate_cost_spec(const CostSpec& spec, const QuantumSystem& sys,
                        const TimeGrid& grid) {
  const int size = sys.state_size();
  auto check_psd = [size](const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != size || m.cols() != size)
      throw std::invalid_argument(std::string("CostSpec: ") + name +
                                  " has wrong dimensions");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument(std::string("CostSpec: ") + name +
                                  " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument(std::string("CostSpec: ") + name +
                                  " is not positive semidefinite");
  };
  check_psd(spec.state_penalty, "state penalty");
  check_psd(spec.terminal_penalty, "terminal penalty");
  if (!spec.input_weight)
    throw std::invalid_argument("CostSpec: input weight is not set");
  const int m = sys.channel_count();
  for (int k = 0; k <= grid.steps; ++k) {
    const Eigen::MatrixXd w = spec.input_weight(grid.node(k));
    if (w.rows() != m || w.cols() != m)
      throw std::invalid_argument("CostSpec: input weight has wrong dimensions");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (w + w.transpose()));
    if (eig.eigenvalues().minCoeff() <= 0.0)
      throw std::invalid_argument(
          "CostSpec: input weight is not positive definite at node " +
          std::to_string(k));
  }
}

VectorSignal resample_onto(const VectorSignal& sig, const TimeGrid& grid) {
  if (sig.grid.same_as(grid)) return sig;
  if (sig.grid.horizon != grid.horizon)
    throw std::invalid_argument("solve: initial control horizon does not match the grid");
  VectorSignal out{grid, {}};
  out.values.reserve(grid.node_count());
  for (int k = 0; k <= grid.steps; ++k)
    out.values.push_back(interpolate(sig, grid.node(k)));
  return out;
}

VectorSignal blend(const VectorSignal& u, double gamma, const VectorSignal& nu) {
  VectorSignal out{u.grid, {}};
  out.values.reserve(u.values.size());
  for (std::size_t k = 0; k < u.values.size(); ++k)
    out.values.push_back(u.values[k] + gamma * nu.values[k]);
  return out;
}

}  // namespace

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5))
    throw std::invalid_argument("SolverConfig: alpha must lie in (0, 0.5)");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
    throw std::invalid_argument("SolverConfig: beta must lie in (0, 1)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("SolverConfig: delta must lie in (0, 1)");
  if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  if (cfg.max_backtracks < 1)
    throw std::invalid_argument("SolverConfig: max_backtracks must be positive");
  if (cfg.grid.steps < 2 || cfg.grid.steps % 2 != 0)
    throw std::invalid_argument("SolverConfig: grid needs an even step count of at least 2");
}

double cap_step(const VectorSignal& z, double x0_norm, double delta) {
  double peak = 0.0;
  for (const Eigen::VectorXd& zk : z.values) peak = std::max(peak, zk.norm());
  if (peak == 0.0) return 1.0;
  return std::min(1.0, delta * x0_norm / peak);
}

ArmijoResult armijo_search(double cost_current, double dg, double gamma0,
                           const std::function<double(double)>& evaluate,
                           const SolverConfig& cfg) {
  if (!(dg < 0.0))
    throw std::invalid_argument("armijo_search: needs a descent direction (dg < 0)");
  ArmijoResult result;
  double gamma = gamma0;
  for (int i = 0; i < cfg.max_backtracks; ++i) {
    const double cost = evaluate(gamma);
    if (cost <= cost_current + cfg.alpha * gamma * dg)
      return ArmijoResult{gamma, cost, i, true};
    result = ArmijoResult{gamma, cost, i + 1, false};
    gamma *= cfg.beta;
  }
  return result;
}

SolveReport solve(const QuantumSystem& sys, const CostSpec& spec,
                  const RealState& x0, const VectorSignal& initial_control,
                  const SolverConfig& cfg, const IterationObserver& observer) {
  validate_config(cfg);
  validate_system(sys);
  validate_cost_spec(spec, sys, cfg.grid);

  VectorSignal u = resample_onto(initial_control, cfg.grid);
  Trajectory xi = project(sys, x0, u);
  double cost = total_cost(spec, xi);

  SolveReport report;
  report.termination = Termination::MaxIters;

  auto emit = [&](const IterationRecord& rec) {
    report.iterations.push_back(rec);
    if (observer) observer(rec);
  };

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // Newton step first; rebuild positive semidefinite on failure.
    StepKind kind = StepKind::Newton;
    DescentResult dir;
    bool have_direction = false;
    try {
      const Costate chi = solve_costate(sys, spec, xi);
      const LqCoefficients co = linearize(sys, spec, xi, &chi, DescentMode::Newton);
      const RiccatiSolution ric = solve_riccati(co, cfg.grid);
      dir = descend(co, ric, cfg.grid);
      have_direction = true;
    } catch (const RiccatiFailure&) {
    } catch (const DivergedIntegration&) {
    }
    if (!have_direction) {
      kind = StepKind::QuasiNewton;
      const LqCoefficients co = linearize(sys, spec, xi, nullptr, DescentMode::QuasiNewton);
      const RiccatiSolution ric = solve_riccati(co, cfg.grid);
      dir = descend(co, ric, cfg.grid);
    }

    IterationRecord rec;
    rec.index = iter;
    rec.cost = cost;
    rec.dg = dir.dg;
    rec.step_kind = kind;
    rec.infidelity = infidelity_of(spec, xi);

    if (-dir.dg <= cfg.tol) {
      rec.gamma = 0.0;
      rec.backtracks = 0;
      emit(rec);
      report.converged = true;
      report.termination = Termination::Converged;
      break;
    }

    const double gamma0 = cap_step(dir.z, x0.norm(), cfg.delta);
    Trajectory candidate;
    auto evaluate = [&](double gamma) {
      try {
        candidate = project(sys, x0, blend(u, gamma, dir.nu));
      } catch (const DivergedIntegration&) {
        return std::numeric_limits<double>::infinity();
      }
      return total_cost(spec, candidate);
    };
    const ArmijoResult ls = armijo_search(cost, dir.dg, gamma0, evaluate, cfg);

    rec.gamma = ls.accepted ? ls.gamma : 0.0;
    rec.backtracks = ls.backtracks;
    emit(rec);

    if (!ls.accepted) {
      report.termination = Termination::LineSearchStalled;
      break;
    }

    u = candidate.controls;
    xi = std::move(candidate);
    cost = ls.cost;
  }

  report.final_trajectory = std::move(xi);
  report.final_cost = cost;
  return report;
}

}  // namespace qpronto
