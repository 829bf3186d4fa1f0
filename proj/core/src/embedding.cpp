#include "qpronto/embedding.hpp"

#include <complex>
#include <stdexcept>
#include <string>

namespace qpronto {

RealState embed_state(const ComplexKet& ket) {
  const Eigen::Index n = ket.size();
  if (n < 1) throw std::invalid_argument("embed_state: ket must have at least one amplitude");
  RealState x(2 * n);
  x.head(n) = ket.real();
  x.tail(n) = ket.imag();
  return x;
}

ComplexKet extract_state(const RealState& x) {
  if (x.size() % 2 != 0)
    throw std::invalid_argument("extract_state: real state length must be even");
  const Eigen::Index n = x.size() / 2;
  ComplexKet ket(n);
  ket.real() = x.head(n);
  ket.imag() = x.tail(n);
  return ket;
}

RealOperator embed_observable(const ComplexMatrix& op) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("embed_observable: operator must be square");
  const Eigen::Index n = op.rows();
  RealOperator out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = op.real();
  out.topRightCorner(n, n) = -op.imag();
  out.bottomLeftCorner(n, n) = op.imag();
  out.bottomRightCorner(n, n) = op.real();
  return out;
}

RealOperator embed_generator(const ComplexMatrix& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols())
    throw std::invalid_argument("embed_generator: Hamiltonian must be square");
  if (hamiltonian.rows() < 1)
    throw std::invalid_argument("embed_generator: Hamiltonian must be at least 1x1");
  const double deviation =
      (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > kHermitianTolerance)
    throw std::invalid_argument(
        "embed_generator: Hamiltonian is not Hermitian (max |H - H^dagger| = " +
        std::to_string(deviation) + ")");
  const ComplexMatrix minus_i_h = std::complex<double>(0.0, -1.0) * hamiltonian;
  return embed_observable(minus_i_h);
}

}  // namespace qpronto
