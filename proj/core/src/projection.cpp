#include "qpronto/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace qpronto {

Trajectory project(const QuantumSystem& sys, const RealState& x0,
                   const VectorSignal& control) {
  if (control.grid.steps < 1 || !(control.grid.horizon > 0.0))
    throw std::invalid_argument("project: degenerate time grid");
  if (x0.size() != sys.state_size())
    throw std::invalid_argument("project: initial state dimension mismatch");
  if (std::abs(x0.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("project: initial state must have unit norm");
  if (static_cast<int>(control.values.size()) != control.grid.node_count())
    throw std::invalid_argument("project: control sample count does not match grid");

  auto rhs = [&sys, &control](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return generator_at(sys, interpolate(control, t)) * x;
  };
  VectorSignal states = integrate_forward(rhs, x0, control.grid);
  return Trajectory{std::move(states), control, std::nullopt};
}

double total_cost(const CostSpec& spec, const Trajectory& traj) {
  const TimeGrid& grid = traj.grid();
  if (!traj.states.grid.same_as(grid))
    throw std::invalid_argument("total_cost: state and control grids differ");
  if (grid.steps % 2 != 0)
    throw std::invalid_argument("total_cost: Simpson quadrature needs an even step count");

  double integral = 0.0;
  for (int k = 0; k <= grid.steps; ++k) {
    const double w = (k == 0 || k == grid.steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    integral += w * incremental_cost(spec, grid.node(k), traj.states.values[k],
                                     traj.controls.values[k]);
  }
  integral *= grid.dt() / 3.0;
  return terminal_cost(spec, traj.states.values.back()) + integral;
}

Costate solve_costate(const QuantumSystem& sys, const CostSpec& spec,
                      const Trajectory& traj) {
  const Eigen::VectorXd pi = spec.terminal_penalty * traj.states.values.back();
  auto rhs = [&sys, &spec, &traj](double t, const Eigen::VectorXd& chi) -> Eigen::VectorXd {
    return generator_at(sys, interpolate(traj.controls, t)).transpose() * chi +
           spec.state_penalty * interpolate(traj.states, t);
  };
  return Costate{integrate_backward(rhs, pi, traj.grid())};
}

}  // namespace qpronto
