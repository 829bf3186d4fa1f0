#pragma once

#include <Eigen/Dense>

namespace qpronto {

using ComplexKet = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealState = Eigen::VectorXd;
using RealOperator = Eigen::MatrixXd;

/// Inputs to embed_generator must be Hermitian within this tolerance.
inline constexpr double kHermitianTolerance = 1e-12;

/// Stacks a complex ket into a real vector laid out as [Re(psi); Im(psi)].
RealState embed_state(const ComplexKet& ket);

/// Inverse of embed_state. Throws std::invalid_argument for odd-length input.
ComplexKet extract_state(const RealState& x);

/// Real 2n x 2n image [[Re Y, -Im Y], [Im Y, Re Y]] of a complex operator.
/// For Hermitian Y the image is symmetric and quadratic forms are preserved:
/// embed_state(psi)^T Y_emb embed_state(psi) = <psi|Y|psi>.
RealOperator embed_observable(const ComplexMatrix& op);

/// Real image of -i*H for Hermitian H. The result is skew-symmetric, so the
/// flow of x' = G x preserves the Euclidean norm. Throws
/// std::invalid_argument if H is not Hermitian within kHermitianTolerance.
RealOperator embed_generator(const ComplexMatrix& hamiltonian);

}  // namespace qpronto
