#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qpronto {

/// Uniform grid t_k = k * dt on [0, T] with dt = T / steps.
struct TimeGrid {
  double horizon = 0.0;
  int steps = 0;

  static TimeGrid uniform(double horizon, int steps) {
    if (!(horizon > 0.0))
      throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps < 2)
      throw std::invalid_argument("TimeGrid: need at least 2 steps");
    return TimeGrid{horizon, steps};
  }

  double t0() const { return 0.0; }
  double dt() const { return horizon / steps; }
  double node(int k) const { return k * dt(); }
  int node_count() const { return steps + 1; }
  bool same_as(const TimeGrid& other) const {
    return horizon == other.horizon && steps == other.steps;
  }
};

/// Signal holding one sample per grid node.
template <class Value>
struct Sampled {
  TimeGrid grid;
  std::vector<Value> values;

  static Sampled constant(const TimeGrid& grid, const Value& value) {
    return Sampled{grid,
                   std::vector<Value>(static_cast<std::size_t>(grid.node_count()), value)};
  }
};

using VectorSignal = Sampled<Eigen::VectorXd>;
using MatrixSignal = Sampled<Eigen::MatrixXd>;

/// Piecewise-linear interpolation, exact at the nodes. Throws
/// std::out_of_range for queries outside [0, T] beyond rounding slack.
template <class Value>
Value interpolate(const Sampled<Value>& sig, double t) {
  const TimeGrid& g = sig.grid;
  const double dt = g.dt();
  const double slack = 1e-9 * g.horizon;
  if (t < g.t0() - slack || t > g.horizon + slack)
    throw std::out_of_range("interpolate: query time outside the grid");
  int k = static_cast<int>(std::floor(t / dt));
  if (k < 0) k = 0;
  if (k > g.steps - 1) k = g.steps - 1;
  if (t == g.node(k)) return sig.values[static_cast<std::size_t>(k)];
  if (t == g.node(k + 1)) return sig.values[static_cast<std::size_t>(k + 1)];
  const double s = (t - g.node(k)) / dt;
  return sig.values[static_cast<std::size_t>(k)] +
         s * (sig.values[static_cast<std::size_t>(k + 1)] -
              sig.values[static_cast<std::size_t>(k)]);
}

}  // namespace qpronto
