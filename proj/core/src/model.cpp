#include "qpronto/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace qpronto {

CouplingFunction CouplingFunction::linear() {
  return CouplingFunction{
      [](double u) { return u; },
      [](double) { return 1.0; },
      [](double) { return 0.0; },
  };
}

CouplingFunction CouplingFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty())
    throw std::invalid_argument("CouplingFunction::polynomial: empty coefficient list");
  auto horner = [](const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  std::vector<double> c1(coefficients.size() > 1 ? coefficients.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < coefficients.size(); ++i)
    c1[i - 1] = static_cast<double>(i) * coefficients[i];
  std::vector<double> c2(c1.size() > 1 ? c1.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < c1.size(); ++i)
    c2[i - 1] = static_cast<double>(i) * c1[i];
  return CouplingFunction{
      [horner, c = std::move(coefficients)](double u) { return horner(c, u); },
      [horner, c = std::move(c1)](double u) { return horner(c, u); },
      [horner, c = std::move(c2)](double u) { return horner(c, u); },
  };
}

void validate_system(const QuantumSystem& sys) {
  const int size = sys.state_size();
  if (sys.dim < 1) throw std::invalid_argument("QuantumSystem: dimension must be positive");
  auto check = [size](const RealOperator& g, const std::string& name) {
    if (g.rows() != size || g.cols() != size)
      throw std::invalid_argument("QuantumSystem: " + name + " has wrong dimensions");
    if ((g + g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("QuantumSystem: " + name + " is not skew-symmetric");
  };
  check(sys.drift, "drift generator");
  for (std::size_t j = 0; j < sys.channels.size(); ++j) {
    check(sys.channels[j].generator, "control generator " + std::to_string(j));
    const CouplingFunction& f = sys.channels[j].coupling;
    if (!f.eval || !f.d1 || !f.d2)
      throw std::invalid_argument("QuantumSystem: coupling " + std::to_string(j) +
                                  " is missing a derivative");
  }
}

RealOperator generator_at(const QuantumSystem& sys, const Eigen::VectorXd& u) {
  if (u.size() != sys.channel_count())
    throw std::invalid_argument("generator_at: control dimension mismatch");
  RealOperator g = sys.drift;
  for (int j = 0; j < sys.channel_count(); ++j)
    g += sys.channels[j].coupling.eval(u[j]) * sys.channels[j].generator;
  return g;
}

RealOperator generator_d1(const QuantumSystem& sys, const Eigen::VectorXd& u,
                          int channel) {
  if (channel < 0 || channel >= sys.channel_count())
    throw std::out_of_range("generator_d1: channel index out of range");
  if (u.size() != sys.channel_count())
    throw std::invalid_argument("generator_d1: control dimension mismatch");
  return sys.channels[channel].coupling.d1(u[channel]) *
         sys.channels[channel].generator;
}

RealOperator generator_d2(const QuantumSystem& sys, const Eigen::VectorXd& u,
                          int channel_i, int channel_j) {
  if (channel_i < 0 || channel_i >= sys.channel_count() || channel_j < 0 ||
      channel_j >= sys.channel_count())
    throw std::out_of_range("generator_d2: channel index out of range");
  if (u.size() != sys.channel_count())
    throw std::invalid_argument("generator_d2: control dimension mismatch");
  if (channel_i != channel_j)
    return RealOperator::Zero(sys.state_size(), sys.state_size());
  return sys.channels[channel_i].coupling.d2(u[channel_i]) *
         sys.channels[channel_i].generator;
}

double incremental_cost(const CostSpec& spec, double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u) {
  if (spec.state_penalty.rows() != x.size())
    throw std::invalid_argument("incremental_cost: state dimension mismatch");
  const Eigen::MatrixXd weight = spec.input_weight(t);
  if (weight.rows() != u.size() || weight.cols() != u.size())
    throw std::invalid_argument("incremental_cost: input weight dimension mismatch");
  return 0.5 * x.dot(spec.state_penalty * x) + 0.5 * u.dot(weight * u);
}

double terminal_cost(const CostSpec& spec, const Eigen::VectorXd& x_final) {
  if (spec.terminal_penalty.rows() != x_final.size())
    throw std::invalid_argument("terminal_cost: state dimension mismatch");
  return 0.5 * x_final.dot(spec.terminal_penalty * x_final);
}

double blackman_window(double t, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("blackman_window: width must be positive");
  const double phase = 2.0 * std::numbers::pi * t / width;
  return 0.5 * (0.84 - std::cos(phase) + 0.16 * std::cos(2.0 * phase));
}

}  // namespace qpronto
