#pragma once

#include <functional>
#include <vector>

#include "qpronto/embedding.hpp"

namespace qpronto {

/// Scalar coupling f_j together with its first two derivatives.
struct CouplingFunction {
  std::function<double(double)> eval;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  static CouplingFunction linear();
  /// coefficients[0] + coefficients[1] * u + coefficients[2] * u^2 + ...
  static CouplingFunction polynomial(std::vector<double> coefficients);
};

struct ControlChannel {
  RealOperator generator;  // embedded -i H_j, skew-symmetric 2n x 2n
  CouplingFunction coupling;
};

/// Controlled closed system in the real embedding:
///   x' = (G_0 + sum_j f_j(u_j) G_j) x
/// with all generators skew-symmetric, so the flow preserves the norm.
struct QuantumSystem {
  RealOperator drift;  // embedded -i H_0
  std::vector<ControlChannel> channels;
  int dim = 0;  // complex dimension n; real states have size 2n

  int state_size() const { return 2 * dim; }
  int channel_count() const { return static_cast<int>(channels.size()); }
};

/// Throws std::invalid_argument unless every generator is 2n x 2n and
/// skew-symmetric within tolerance.
void validate_system(const QuantumSystem& sys);

/// Full generator G_0 + sum_j f_j(u_j) G_j at the control value u.
RealOperator generator_at(const QuantumSystem& sys, const Eigen::VectorXd& u);

/// Partial derivative of the generator in channel `channel`:
/// f'_channel(u_channel) * G_channel.
RealOperator generator_d1(const QuantumSystem& sys, const Eigen::VectorXd& u,
                          int channel);

/// Second partial of the generator. Each coupling depends on its own channel
/// only, so the result is f''_i(u_i) * G_i for i == j and zero otherwise.
RealOperator generator_d2(const QuantumSystem& sys, const Eigen::VectorXd& u,
                          int channel_i, int channel_j);

/// Time-varying input weight R(t), symmetric positive definite m x m.
using InputWeight = std::function<Eigen::MatrixXd(double)>;

struct CostSpec {
  Eigen::MatrixXd state_penalty;     // 2n x 2n PSD; zero when unused
  Eigen::MatrixXd terminal_penalty;  // 2n x 2n PSD
  InputWeight input_weight;
};

/// 0.5 x^T P_state x + 0.5 u^T R(t) u.
double incremental_cost(const CostSpec& spec, double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u);

/// 0.5 x^T P_terminal x.
double terminal_cost(const CostSpec& spec, const Eigen::VectorXd& x_final);

/// 0.5 * (0.84 - cos(2 pi t / width) + 0.16 cos(4 pi t / width)).
/// Zero at t = 0, one at t = width / 2, symmetric about width / 2.
double blackman_window(double t, double width);

}  // namespace qpronto
