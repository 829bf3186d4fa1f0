#pragma once

#include <optional>

#include "qpronto/integrate.hpp"
#include "qpronto/model.hpp"

namespace qpronto {

/// Dynamically consistent state/control pair on a shared grid.
struct Trajectory {
  VectorSignal states;    // x(t_k), size 2n
  VectorSignal controls;  // u(t_k), size m
  /// Reserved for a stabilizing feedback term in the projection; closed
  /// systems evolve on the sphere, so the current operator leaves it empty.
  std::optional<MatrixSignal> regulator_gain;
  const TimeGrid& grid() const { return controls.grid; }
};

/// Maps a control signal to the trajectory obtained by integrating the
/// closed-system dynamics under it. Control samples are kept verbatim, so
/// applying the operator to the control of a returned trajectory reproduces
/// that trajectory exactly. Requires a unit-norm initial state.
Trajectory project(const QuantumSystem& sys, const RealState& x0,
                   const VectorSignal& control);

/// Terminal cost plus the composite-Simpson integral of the incremental
/// cost over the grid. Requires an even number of grid steps.
double total_cost(const CostSpec& spec, const Trajectory& traj);

struct Costate {
  VectorSignal chi;  // 2n per node; chi(T) equals the terminal cost gradient
};

/// Backward solve of -chi' = G(u(t))^T chi + P_state x(t) with terminal
/// value P_terminal x(T).
Costate solve_costate(const QuantumSystem& sys, const CostSpec& spec,
                      const Trajectory& traj);

}  // namespace qpronto
