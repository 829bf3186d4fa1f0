#pragma once

#include <functional>
#include <vector>

#include "qpronto/lq.hpp"

namespace qpronto {

struct SolverConfig {
  TimeGrid grid = TimeGrid{5.0, 5000};
  double tol = 1e-2;      // exit threshold on -Dg
  double alpha = 0.4;     // Armijo sufficient-decrease fraction, in (0, 0.5)
  double beta = 0.7;      // backtracking shrink factor, in (0, 1)
  double delta = 0.6;     // step cap fraction of the state norm, in (0, 1)
  int max_iters = 50;
  int max_backtracks = 40;
};

/// Throws std::invalid_argument if any parameter is outside its range.
void validate_config(const SolverConfig& cfg);

enum class StepKind { Newton, QuasiNewton };

/// One outer iteration: the state of iterate k and the step taken from it.
/// `cost` is the cost of iterate k (before the step), so the sequence of
/// records is strictly decreasing. For a converged final record no step was
/// taken and gamma is 0.
struct IterationRecord {
  int index = 0;
  double cost = 0.0;
  double dg = 0.0;
  double gamma = 0.0;
  StepKind step_kind = StepKind::Newton;
  int backtracks = 0;
  double infidelity = 0.0;  // x(T)^T P_terminal x(T)
};

enum class Termination { Converged, MaxIters, LineSearchStalled };

struct SolveReport {
  std::vector<IterationRecord> iterations;
  Trajectory final_trajectory;
  double final_cost = 0.0;
  bool converged = false;
  Termination termination = Termination::MaxIters;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Iterative descent: project the control, build the local LQ model (Newton
/// first, quasi-Newton on Riccati failure), compute the descent direction,
/// cap the initial step, Armijo-backtrack, update, repeat until -Dg <= tol
/// or a budget runs out. Every accepted step strictly reduces the cost.
SolveReport solve(const QuantumSystem& sys, const CostSpec& spec,
                  const RealState& x0, const VectorSignal& initial_control,
                  const SolverConfig& cfg, const IterationObserver& observer = {});

/// Initial step bound min(1, delta * ||x0|| / max_k ||z(t_k)||); 1 when the
/// update is identically zero.
double cap_step(const VectorSignal& z, double x0_norm, double delta);

struct ArmijoResult {
  double gamma = 0.0;
  double cost = 0.0;
  int backtracks = 0;
  bool accepted = false;
};

/// Backtracking line search: returns the first gamma in {gamma0 * beta^i}
/// with evaluate(gamma) <= cost_current + alpha * gamma * dg. Requires
/// dg < 0. Gives up (accepted = false) after max_backtracks rejections.
ArmijoResult armijo_search(double cost_current, double dg, double gamma0,
                           const std::function<double(double)>& evaluate,
                           const SolverConfig& cfg);

}  // namespace qpronto
