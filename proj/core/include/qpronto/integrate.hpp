#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "qpronto/time_grid.hpp"

namespace qpronto {

/// Raised when an integrated trajectory leaves the finite range. `node` is
/// the index of the first bad sample on the original grid.
struct DivergedIntegration : std::runtime_error {
  int node;
  explicit DivergedIntegration(int node_index)
      : std::runtime_error("integration diverged at node " +
                           std::to_string(node_index)),
        node(node_index) {}
};

/// Samples with a norm beyond this limit count as diverged.
inline constexpr double kDivergenceNormLimit = 1e8;

inline bool sample_in_range(const Eigen::VectorXd& y) {
  return y.allFinite() && y.norm() <= kDivergenceNormLimit;
}

/// One classical 4th-order Runge-Kutta step from t to t_next (either
/// direction). rhs is (t, y) -> dy/dt.
template <class Rhs>
Eigen::VectorXd rk4_step(Rhs&& rhs, double t, double t_next,
                         const Eigen::VectorXd& y) {
  const double h = t_next - t;
  const double t_mid = 0.5 * (t + t_next);
  const Eigen::VectorXd k1 = rhs(t, y);
  const Eigen::VectorXd k2 = rhs(t_mid, Eigen::VectorXd(y + (0.5 * h) * k1));
  const Eigen::VectorXd k3 = rhs(t_mid, Eigen::VectorXd(y + (0.5 * h) * k2));
  const Eigen::VectorXd k4 = rhs(t_next, Eigen::VectorXd(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Solves y' = rhs(t, y) from y(0) = y0, sampling every grid node.
/// Throws DivergedIntegration on the first non-finite or out-of-range sample.
template <class Rhs>
VectorSignal integrate_forward(Rhs&& rhs, const Eigen::VectorXd& y0,
                               const TimeGrid& grid) {
  VectorSignal out{grid, {}};
  out.values.reserve(static_cast<std::size_t>(grid.node_count()));
  if (!sample_in_range(y0)) throw DivergedIntegration(0);
  out.values.push_back(y0);
  for (int k = 0; k < grid.steps; ++k) {
    Eigen::VectorXd next =
        rk4_step(rhs, grid.node(k), grid.node(k + 1), out.values.back());
    if (!sample_in_range(next)) throw DivergedIntegration(k + 1);
    out.values.push_back(std::move(next));
  }
  return out;
}

/// Solves -y' = rhs(t, y) from the terminal value y(T) = yT, stepping down
/// the same grid; values[k] corresponds to t_k, values[steps] equals yT.
template <class Rhs>
VectorSignal integrate_backward(Rhs&& rhs, const Eigen::VectorXd& yT,
                                const TimeGrid& grid) {
  VectorSignal out{grid,
                   std::vector<Eigen::VectorXd>(
                       static_cast<std::size_t>(grid.node_count()))};
  if (!sample_in_range(yT)) throw DivergedIntegration(grid.steps);
  out.values[static_cast<std::size_t>(grid.steps)] = yT;
  auto negated = [&rhs](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -rhs(t, y);
  };
  for (int k = grid.steps; k > 0; --k) {
    Eigen::VectorXd prev =
        rk4_step(negated, grid.node(k), grid.node(k - 1),
                 out.values[static_cast<std::size_t>(k)]);
    if (!sample_in_range(prev)) throw DivergedIntegration(k - 1);
    out.values[static_cast<std::size_t>(k - 1)] = std::move(prev);
  }
  return out;
}

}  // namespace qpronto
