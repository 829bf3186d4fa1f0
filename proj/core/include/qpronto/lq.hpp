#pragma once

#include "qpronto/projection.hpp"

namespace qpronto {

enum class DescentMode { Newton, QuasiNewton };

/// Time-varying coefficients of the local linear-quadratic model around a
/// trajectory: perturbation dynamics z' = A z + B nu, first-order cost terms
/// (q, r, pi) and second-order cost terms (Q, S, R, Pi).
struct LqCoefficients {
  MatrixSignal A;      // 2n x 2n, skew-symmetric
  MatrixSignal B;      // 2n x m
  VectorSignal q;      // 2n
  VectorSignal r;      // m
  MatrixSignal Q;      // 2n x 2n
  MatrixSignal S;      // 2n x m
  MatrixSignal R;      // m x m
  Eigen::VectorXd pi;  // 2n
  Eigen::MatrixXd Pi;  // 2n x 2n
  DescentMode mode = DescentMode::QuasiNewton;
};

/// Raised when the Riccati backward solve cannot produce a usable gain:
/// either some R(t_k) has an eigenvalue at or below the positivity floor, or
/// the value matrix left the finite range during integration.
struct RiccatiFailure : std::runtime_error {
  enum class Reason { IndefiniteInputWeight, Diverged };
  Reason reason;
  int node;
  RiccatiFailure(Reason reason_, int node_)
      : std::runtime_error(reason_ == Reason::IndefiniteInputWeight
                               ? "Riccati solve failed: input weight not positive "
                                 "definite at node " + std::to_string(node_)
                               : "Riccati solve failed: diverged at node " +
                                 std::to_string(node_)),
        reason(reason_),
        node(node_) {}
};

/// Eigenvalues of R(t_k) at or below this floor trigger RiccatiFailure.
inline constexpr double kInputWeightFloor = 1e-10;

struct RiccatiSolution {
  MatrixSignal P;            // symmetric value matrix, P(T) = Pi
  VectorSignal p;            // linear value term, p(T) = pi
  MatrixSignal gain;         // K_o = R^-1 (B^T P + S^T), m x 2n
  VectorSignal feedforward;  // v_o = R^-1 (B^T p + r), m
};

struct DescentResult {
  VectorSignal z;            // state update approximation, z(0) = 0
  VectorSignal nu;           // descent direction, nu = -v_o - K_o z
  double eta_terminal = 0.0; // accumulated running linear cost
  double dg = 0.0;           // directional derivative pi^T z(T) + eta(T)
};

/// Assembles the linear-quadratic model around the trajectory. Newton mode
/// requires the costate and adds the curvature terms it generates: S gains
/// columns G_i(t)^T chi(t) and R gains entries chi^T G_ij x. Quasi-Newton
/// mode omits both, which keeps the model positive semidefinite and needs
/// no costate.
LqCoefficients linearize(const QuantumSystem& sys, const CostSpec& spec,
                         const Trajectory& traj, const Costate* chi,
                         DescentMode mode);

/// Backward solve of the coupled differential Riccati / feedforward system
///   -P' = A^T P + P A - K_o^T R K_o + Q,        P(T) = Pi,
///   -p' = (A - B K_o)^T p - K_o^T r + q,        p(T) = pi,
/// with K_o = R^-1 (B^T P + S^T) and v_o = R^-1 (B^T p + r) evaluated
/// pointwise. P is re-symmetrized after every step to suppress drift.
RiccatiSolution solve_riccati(const LqCoefficients& co, const TimeGrid& grid);

/// Forward closed-loop solve of
///   z' = A z + B nu,  eta' = q^T z + r^T nu,  nu = -v_o - K_o z,
/// from z(0) = 0, eta(0) = 0. Returns nu, z and Dg = pi^T z(T) + eta(T).
DescentResult descend(const LqCoefficients& co, const RiccatiSolution& ric,
                      const TimeGrid& grid);

/// Value of the local quadratic model at (z, nu): terminal linear plus
/// quadratic parts and the Simpson-integrated running parts.
double lq_objective(const LqCoefficients& co, const VectorSignal& z,
                    const VectorSignal& nu);

}  // namespace qpronto
