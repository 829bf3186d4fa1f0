#include "qpronto/lq.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <utility>

namespace qpronto {

namespace {

// Packs the coupled Riccati state [vec(P); p] for the vector integrator.
Eigen::VectorXd pack(const Eigen::MatrixXd& P, const Eigen::VectorXd& p) {
  const Eigen::Index n = P.rows();
  Eigen::VectorXd y(n * n + p.size());
  y.head(n * n) = Eigen::Map<const Eigen::VectorXd>(P.data(), n * n);
  y.tail(p.size()) = p;
  return y;
}

Eigen::MatrixXd unpack_value_matrix(const Eigen::VectorXd& y, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(y.data(), n, n);
}

Eigen::VectorXd unpack_linear_term(const Eigen::VectorXd& y, Eigen::Index n) {
  return y.tail(y.size() - n * n);
}

}  // namespace

LqCoefficients linearize(const QuantumSystem& sys, const CostSpec& spec,
                         const Trajectory& traj, const Costate* chi,
                         DescentMode mode) {
  if (mode == DescentMode::Newton && chi == nullptr)
    throw std::invalid_argument("linearize: Newton mode requires the costate");
  const TimeGrid& grid = traj.grid();
  const int nodes = grid.node_count();
  const int size = sys.state_size();
  const int m = sys.channel_count();

  LqCoefficients co;
  co.mode = mode;
  co.A = MatrixSignal{grid, {}};
  co.B = MatrixSignal{grid, {}};
  co.q = VectorSignal{grid, {}};
  co.r = VectorSignal{grid, {}};
  co.Q = MatrixSignal{grid, {}};
  co.S = MatrixSignal{grid, {}};
  co.R = MatrixSignal{grid, {}};
  co.A.values.reserve(nodes);
  co.B.values.reserve(nodes);
  co.q.values.reserve(nodes);
  co.r.values.reserve(nodes);
  co.Q.values.reserve(nodes);
  co.S.values.reserve(nodes);
  co.R.values.reserve(nodes);

  for (int k = 0; k < nodes; ++k) {
    const double t = grid.node(k);
    const Eigen::VectorXd& x = traj.states.values[k];
    const Eigen::VectorXd& u = traj.controls.values[k];

    co.A.values.push_back(generator_at(sys, u));

    Eigen::MatrixXd b(size, m);
    for (int i = 0; i < m; ++i) b.col(i) = generator_d1(sys, u, i) * x;
    co.B.values.push_back(std::move(b));

    co.q.values.push_back(spec.state_penalty * x);

    const Eigen::MatrixXd weight = spec.input_weight(t);
    if (weight.rows() != m || weight.cols() != m)
      throw std::invalid_argument("linearize: input weight dimension mismatch");
    co.r.values.push_back(weight * u);

    co.Q.values.push_back(spec.state_penalty);

    if (mode == DescentMode::Newton) {
      const Eigen::VectorXd& chi_k = chi->chi.values[k];
      Eigen::MatrixXd s(size, m);
      for (int i = 0; i < m; ++i)
        s.col(i) = generator_d1(sys, u, i).transpose() * chi_k;
      co.S.values.push_back(std::move(s));

      Eigen::MatrixXd curvature(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          curvature(i, j) = chi_k.dot(generator_d2(sys, u, i, j) * x);
      co.R.values.push_back(weight + curvature);
    } else {
      co.S.values.push_back(Eigen::MatrixXd::Zero(size, m));
      co.R.values.push_back(weight);
    }
  }

  co.pi = spec.terminal_penalty * traj.states.values.back();
  co.Pi = spec.terminal_penalty;
  return co;
}

RiccatiSolution solve_riccati(const LqCoefficients& co, const TimeGrid& grid) {
  const Eigen::Index size = co.Pi.rows();

  // Positivity of R(t_k) is the solvability certificate for the model.
  for (int k = 0; k <= grid.steps; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (co.R.values[k] + co.R.values[k].transpose()));
    if (eig.eigenvalues().minCoeff() <= kInputWeightFloor)
      throw RiccatiFailure(RiccatiFailure::Reason::IndefiniteInputWeight, k);
  }

  auto rhs = [&co, size](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    const Eigen::MatrixXd P = unpack_value_matrix(y, size);
    const Eigen::VectorXd p = unpack_linear_term(y, size);
    const Eigen::MatrixXd A = interpolate(co.A, t);
    const Eigen::MatrixXd B = interpolate(co.B, t);
    const Eigen::MatrixXd Q = interpolate(co.Q, t);
    const Eigen::MatrixXd S = interpolate(co.S, t);
    const Eigen::MatrixXd R = interpolate(co.R, t);
    const Eigen::VectorXd q = interpolate(co.q, t);
    const Eigen::VectorXd r = interpolate(co.r, t);
    const Eigen::MatrixXd K = R.ldlt().solve(B.transpose() * P + S.transpose());
    const Eigen::MatrixXd minus_p_dot =
        A.transpose() * P + P * A - K.transpose() * R * K + Q;
    const Eigen::VectorXd minus_lin_dot =
        (A - B * K).transpose() * p - K.transpose() * r + q;
    return pack(minus_p_dot, minus_lin_dot);
  };
  auto forward_rhs = [&rhs](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -rhs(t, y);
  };

  RiccatiSolution sol;
  sol.P = MatrixSignal{grid, std::vector<Eigen::MatrixXd>(grid.node_count())};
  sol.p = VectorSignal{grid, std::vector<Eigen::VectorXd>(grid.node_count())};
  sol.P.values[grid.steps] = co.Pi;
  sol.p.values[grid.steps] = co.pi;

  Eigen::VectorXd y = pack(co.Pi, co.pi);
  for (int k = grid.steps; k > 0; --k) {
    y = rk4_step(forward_rhs, grid.node(k), grid.node(k - 1), y);
    if (!y.allFinite() || y.norm() > kDivergenceNormLimit)
      throw RiccatiFailure(RiccatiFailure::Reason::Diverged, k - 1);
    // Re-symmetrize to suppress asymmetry drift.
    Eigen::MatrixXd P = unpack_value_matrix(y, size);
    P = 0.5 * (P + P.transpose()).eval();
    Eigen::VectorXd p = unpack_linear_term(y, size);
    y = pack(P, p);
    sol.P.values[k - 1] = std::move(P);
    sol.p.values[k - 1] = std::move(p);
  }

  sol.gain = MatrixSignal{grid, std::vector<Eigen::MatrixXd>(grid.node_count())};
  sol.feedforward = VectorSignal{grid, std::vector<Eigen::VectorXd>(grid.node_count())};
  for (int k = 0; k <= grid.steps; ++k) {
    const auto solver = co.R.values[k].ldlt();
    sol.gain.values[k] = solver.solve(co.B.values[k].transpose() * sol.P.values[k] +
                                      co.S.values[k].transpose());
    sol.feedforward.values[k] =
        solver.solve(co.B.values[k].transpose() * sol.p.values[k] + co.r.values[k]);
  }
  return sol;
}

DescentResult descend(const LqCoefficients& co, const RiccatiSolution& ric,
                      const TimeGrid& grid) {
  const Eigen::Index size = co.Pi.rows();

  // State is [z; eta].
  auto rhs = [&co, &ric, size](double t, const Eigen::VectorXd& w) -> Eigen::VectorXd {
    const Eigen::VectorXd z = w.head(size);
    const Eigen::VectorXd nu =
        -interpolate(ric.feedforward, t) - interpolate(ric.gain, t) * z;
    Eigen::VectorXd out(w.size());
    out.head(size) = interpolate(co.A, t) * z + interpolate(co.B, t) * nu;
    out[size] = interpolate(co.q, t).dot(z) + interpolate(co.r, t).dot(nu);
    return out;
  };

  const VectorSignal packed =
      integrate_forward(rhs, Eigen::VectorXd::Zero(size + 1), grid);

  DescentResult result;
  result.z = VectorSignal{grid, std::vector<Eigen::VectorXd>(grid.node_count())};
  result.nu = VectorSignal{grid, std::vector<Eigen::VectorXd>(grid.node_count())};
  for (int k = 0; k <= grid.steps; ++k) {
    result.z.values[k] = packed.values[k].head(size);
    result.nu.values[k] =
        -ric.feedforward.values[k] - ric.gain.values[k] * result.z.values[k];
  }
  result.eta_terminal = packed.values.back()[size];
  result.dg = co.pi.dot(result.z.values.back()) + result.eta_terminal;
  return result;
}

double lq_objective(const LqCoefficients& co, const VectorSignal& z,
                    const VectorSignal& nu) {
  const TimeGrid& grid = z.grid;
  if (grid.steps % 2 != 0)
    throw std::invalid_argument("lq_objective: Simpson quadrature needs an even step count");
  if (!nu.grid.same_as(grid))
    throw std::invalid_argument("lq_objective: signal grids differ");

  double integral = 0.0;
  for (int k = 0; k <= grid.steps; ++k) {
    const double w = (k == 0 || k == grid.steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const Eigen::VectorXd& zk = z.values[k];
    const Eigen::VectorXd& nk = nu.values[k];
    const double linear = co.q.values[k].dot(zk) + co.r.values[k].dot(nk);
    const double quadratic = 0.5 * zk.dot(co.Q.values[k] * zk) +
                             zk.dot(co.S.values[k] * nk) +
                             0.5 * nk.dot(co.R.values[k] * nk);
    integral += w * (linear + quadratic);
  }
  integral *= grid.dt() / 3.0;

  const Eigen::VectorXd& zT = z.values.back();
  return co.pi.dot(zT) + 0.5 * zT.dot(co.Pi * zT) + integral;
}

}  // namespace qpronto
