#include "qpronto/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpronto {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& require(const json& node, const std::string& field,
                    const std::string& path) {
  auto it = node.find(field);
  if (it == node.end()) throw ConfigError(path + field, "missing required field");
  return *it;
}

double require_number(const json& node, const std::string& field,
                      const std::string& path) {
  const json& v = require(node, field, path);
  if (!v.is_number()) throw ConfigError(path + field, "expected a number");
  return v.get<double>();
}

int require_int(const json& node, const std::string& field, const std::string& path) {
  const json& v = require(node, field, path);
  if (!v.is_number_integer()) throw ConfigError(path + field, "expected an integer");
  return v.get<int>();
}

std::vector<double> real_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Complex vectors are given as {"re": [...], "im": [...]}; "im" may be omitted.
ComplexKet parse_ket(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected {re: [...], im: [...]}");
  const std::vector<double> re = real_array(require(node, "re", path + "."), path + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (node.contains("im")) {
    im = real_array(node["im"], path + ".im");
    if (im.size() != re.size())
      throw ConfigError(path, "re and im have different lengths");
  }
  ComplexKet ket(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    ket[static_cast<Eigen::Index>(i)] = {re[i], im[i]};
  return ket;
}

ComplexMatrix parse_matrix(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected {re: [[...]], im: [[...]]}");
  const json& re = require(node, "re", path + ".");
  if (!re.is_array() || re.empty()) throw ConfigError(path + ".re", "expected a matrix");
  const std::size_t rows = re.size();
  std::vector<std::vector<double>> re_rows, im_rows;
  for (std::size_t i = 0; i < rows; ++i)
    re_rows.push_back(real_array(re[i], path + ".re"));
  if (node.contains("im")) {
    const json& im = node["im"];
    if (!im.is_array() || im.size() != rows)
      throw ConfigError(path + ".im", "re and im have different shapes");
    for (std::size_t i = 0; i < rows; ++i)
      im_rows.push_back(real_array(im[i], path + ".im"));
  } else {
    im_rows.assign(rows, std::vector<double>(re_rows[0].size(), 0.0));
  }
  const std::size_t cols = re_rows[0].size();
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (re_rows[i].size() != cols || im_rows[i].size() != cols)
      throw ConfigError(path, "matrix rows have unequal lengths");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {re_rows[i][j],
                                                                         im_rows[i][j]};
  }
  return out;
}

SignalDesc parse_signal(const json& node, const std::string& path, bool is_weight) {
  if (!node.is_object()) throw ConfigError(path, "expected an object with a kind");
  const json& kind = require(node, "kind", path + ".");
  if (!kind.is_string()) throw ConfigError(path + ".kind", "expected a string");
  SignalDesc desc;
  const std::string k = kind.get<std::string>();
  if (k == "constant") {
    desc.kind = SignalKind::Constant;
    desc.value = require_number(node, "value", path + ".");
  } else if (k == "blackman_flanked") {
    desc.kind = SignalKind::BlackmanFlanked;
    desc.width = require_number(node, "width", path + ".");
    if (is_weight) {
      desc.epsilon = require_number(node, "epsilon", path + ".");
      desc.value = 1.0;  // plateau level
    } else {
      desc.value = require_number(node, "amplitude", path + ".");
    }
  } else if (k == "tabulated") {
    desc.kind = SignalKind::Tabulated;
    desc.times = real_array(require(node, "times", path + "."), path + ".times");
    desc.values = real_array(require(node, "values", path + "."), path + ".values");
  } else {
    throw ConfigError(path + ".kind", "unknown kind '" + k + "'");
  }
  return desc;
}

void validate_signal(const SignalDesc& desc, const std::string& path, double horizon,
                     bool is_weight) {
  switch (desc.kind) {
    case SignalKind::Constant:
      if (is_weight && !(desc.value > 0.0))
        throw ConfigError(path + ".value", "constant input weight must be positive");
      break;
    case SignalKind::BlackmanFlanked:
      if (!(desc.width > 0.0)) throw ConfigError(path + ".width", "width must be positive");
      if (desc.width > horizon)
        throw ConfigError(path + ".width", "window does not fit in the horizon");
      if (is_weight && !(desc.epsilon > 0.0))
        throw ConfigError(path + ".epsilon", "epsilon must be positive");
      break;
    case SignalKind::Tabulated: {
      if (desc.times.size() != desc.values.size())
        throw ConfigError(path, "times and values have different lengths");
      if (desc.times.size() < 2) throw ConfigError(path, "need at least two samples");
      for (std::size_t i = 1; i < desc.times.size(); ++i)
        if (!(desc.times[i] > desc.times[i - 1]))
          throw ConfigError(path + ".times", "times must be strictly increasing");
      if (desc.times.front() > 0.0 || desc.times.back() < horizon)
        throw ConfigError(path + ".times", "samples must cover [0, horizon]");
      if (is_weight)
        for (double v : desc.values)
          if (!(v > 0.0))
            throw ConfigError(path + ".values", "input weight samples must be positive");
      break;
    }
  }
}

double hermitian_deviation(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double eval_tabulated(const SignalDesc& desc, double t) {
  const auto& ts = desc.times;
  if (t <= ts.front()) return desc.values.front();
  if (t >= ts.back()) return desc.values.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  const std::size_t lo = hi - 1;
  const double s = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return desc.values[lo] + s * (desc.values[hi] - desc.values[lo]);
}

// Plateau of ones with Blackman-shaped rises over [0, width/2] and
// [T - width/2, T]; the weight variant is (1 + eps) / (window + eps) on the
// flanks, which is large at the endpoints and exactly 1 at the plateau.
// The window is clamped to [0, 1] so that rounding at the exact zeros of
// the cosine combination cannot push the weight above (1 + eps) / eps.
double eval_flanked_weight(const SignalDesc& desc, double horizon, double t) {
  const double flank = 0.5 * desc.width;
  auto window = [&](double s) {
    return std::clamp(blackman_window(s, desc.width), 0.0, 1.0);
  };
  if (t <= flank) return (1.0 + desc.epsilon) / (window(t) + desc.epsilon);
  if (t >= horizon - flank)
    return (1.0 + desc.epsilon) / (window(horizon - t) + desc.epsilon);
  return 1.0;
}

double eval_flanked_guess(const SignalDesc& desc, double horizon, double t) {
  const double flank = 0.5 * desc.width;
  if (t <= flank) return desc.value * blackman_window(t, desc.width);
  if (t >= horizon - flank)
    return desc.value * blackman_window(horizon - t, desc.width);
  return desc.value;
}

json signal_to_json(const SignalDesc& desc, bool is_weight) {
  json out;
  switch (desc.kind) {
    case SignalKind::Constant:
      out["kind"] = "constant";
      out["value"] = desc.value;
      break;
    case SignalKind::BlackmanFlanked:
      out["kind"] = "blackman_flanked";
      out["width"] = desc.width;
      if (is_weight)
        out["epsilon"] = desc.epsilon;
      else
        out["amplitude"] = desc.value;
      break;
    case SignalKind::Tabulated:
      out["kind"] = "tabulated";
      out["times"] = desc.times;
      out["values"] = desc.values;
      break;
  }
  return out;
}

json ket_to_json(const ComplexKet& ket) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < ket.size(); ++i) {
    re.push_back(ket[i].real());
    im.push_back(ket[i].imag());
  }
  return json{{"re", re}, {"im", im}};
}

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return json{{"re", re}, {"im", im}};
}

}  // namespace

ProblemConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("", origin + ":" + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", origin + ": top level must be an object");

  const int version = require_int(doc, "schema_version", "");
  if (version != kConfigSchemaVersion)
    throw ConfigError("schema_version",
                      "unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kConfigSchemaVersion) + ")");

  ProblemConfig cfg;
  if (doc.contains("name") && doc["name"].is_string()) cfg.name = doc["name"];

  cfg.dimension = require_int(doc, "dimension", "");
  if (cfg.dimension < 1) throw ConfigError("dimension", "must be at least 1");
  const Eigen::Index n = cfg.dimension;

  cfg.drift = parse_matrix(require(doc, "drift_hamiltonian", ""), "drift_hamiltonian");
  if (cfg.drift.rows() != n || cfg.drift.cols() != n)
    throw ConfigError("drift_hamiltonian", "must be dimension x dimension");
  if (hermitian_deviation(cfg.drift) > kHermitianTolerance)
    throw ConfigError("drift_hamiltonian", "must be Hermitian");

  const json& ctrls = require(doc, "control_hamiltonians", "");
  if (!ctrls.is_array() || ctrls.empty())
    throw ConfigError("control_hamiltonians", "need at least one control");
  for (std::size_t j = 0; j < ctrls.size(); ++j) {
    const std::string path = "control_hamiltonians[" + std::to_string(j) + "]";
    ControlDesc ctrl;
    ctrl.hamiltonian = parse_matrix(require(ctrls[j], "matrix", path + "."), path + ".matrix");
    if (ctrl.hamiltonian.rows() != n || ctrl.hamiltonian.cols() != n)
      throw ConfigError(path + ".matrix", "must be dimension x dimension");
    if (hermitian_deviation(ctrl.hamiltonian) > kHermitianTolerance)
      throw ConfigError(path + ".matrix", "must be Hermitian");
    const json& coupling = require(ctrls[j], "coupling", path + ".");
    const json& kind = require(coupling, "kind", path + ".coupling.");
    if (kind == "linear") {
      ctrl.coupling.kind = CouplingKind::Linear;
    } else if (kind == "polynomial") {
      ctrl.coupling.kind = CouplingKind::Polynomial;
      ctrl.coupling.coefficients =
          real_array(require(coupling, "coefficients", path + ".coupling."),
                     path + ".coupling.coefficients");
      if (ctrl.coupling.coefficients.empty())
        throw ConfigError(path + ".coupling.coefficients", "must not be empty");
    } else {
      throw ConfigError(path + ".coupling.kind", "unknown coupling kind");
    }
    cfg.controls.push_back(std::move(ctrl));
  }

  cfg.initial_state = parse_ket(require(doc, "initial_state", ""), "initial_state");
  if (cfg.initial_state.size() != n)
    throw ConfigError("initial_state", "length must equal dimension");
  if (std::abs(cfg.initial_state.norm() - 1.0) > 1e-12)
    throw ConfigError("initial_state", "must be normalized");

  cfg.target_state = parse_ket(require(doc, "target_state", ""), "target_state");
  if (cfg.target_state.size() != n)
    throw ConfigError("target_state", "length must equal dimension");
  if (std::abs(cfg.target_state.norm() - 1.0) > 1e-12)
    throw ConfigError("target_state", "must be normalized");

  if (doc.contains("forbidden_state")) {
    ForbiddenStateDesc fs;
    const json& node = doc["forbidden_state"];
    fs.state = parse_ket(require(node, "state", "forbidden_state."), "forbidden_state.state");
    if (fs.state.size() != n)
      throw ConfigError("forbidden_state.state", "length must equal dimension");
    if (std::abs(fs.state.norm() - 1.0) > 1e-12)
      throw ConfigError("forbidden_state.state", "must be normalized");
    fs.weight = require_number(node, "weight", "forbidden_state.");
    if (fs.weight < 0.0) throw ConfigError("forbidden_state.weight", "must be nonnegative");
    cfg.forbidden = std::move(fs);
  }

  cfg.horizon = require_number(doc, "horizon", "");
  if (!(cfg.horizon > 0.0)) throw ConfigError("horizon", "must be positive");
  cfg.grid_steps = require_int(doc, "grid_steps", "");
  if (cfg.grid_steps < 2 || cfg.grid_steps % 2 != 0)
    throw ConfigError("grid_steps", "must be an even integer of at least 2");

  cfg.input_weight = parse_signal(require(doc, "input_weight", ""), "input_weight", true);
  validate_signal(cfg.input_weight, "input_weight", cfg.horizon, true);
  cfg.initial_guess = parse_signal(require(doc, "initial_guess", ""), "initial_guess", false);
  validate_signal(cfg.initial_guess, "initial_guess", cfg.horizon, false);

  cfg.solver.grid = TimeGrid::uniform(cfg.horizon, cfg.grid_steps);
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) throw ConfigError("solver", "expected an object");
    if (s.contains("tol")) cfg.solver.tol = require_number(s, "tol", "solver.");
    if (s.contains("alpha")) cfg.solver.alpha = require_number(s, "alpha", "solver.");
    if (s.contains("beta")) cfg.solver.beta = require_number(s, "beta", "solver.");
    if (s.contains("delta")) cfg.solver.delta = require_number(s, "delta", "solver.");
    if (s.contains("max_iters")) cfg.solver.max_iters = require_int(s, "max_iters", "solver.");
    if (s.contains("max_backtracks"))
      cfg.solver.max_backtracks = require_int(s, "max_backtracks", "solver.");
  }
  try {
    validate_config(cfg.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string config_to_json(const ProblemConfig& config) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  if (!config.name.empty()) doc["name"] = config.name;
  doc["dimension"] = config.dimension;
  doc["drift_hamiltonian"] = matrix_to_json(config.drift);
  json ctrls = json::array();
  for (const ControlDesc& c : config.controls) {
    json node;
    node["matrix"] = matrix_to_json(c.hamiltonian);
    if (c.coupling.kind == CouplingKind::Linear) {
      node["coupling"] = json{{"kind", "linear"}};
    } else {
      node["coupling"] = json{{"kind", "polynomial"},
                              {"coefficients", c.coupling.coefficients}};
    }
    ctrls.push_back(node);
  }
  doc["control_hamiltonians"] = ctrls;
  doc["initial_state"] = ket_to_json(config.initial_state);
  doc["target_state"] = ket_to_json(config.target_state);
  if (config.forbidden) {
    doc["forbidden_state"] = json{{"state", ket_to_json(config.forbidden->state)},
                                  {"weight", config.forbidden->weight}};
  }
  doc["horizon"] = config.horizon;
  doc["grid_steps"] = config.grid_steps;
  doc["input_weight"] = signal_to_json(config.input_weight, true);
  doc["initial_guess"] = signal_to_json(config.initial_guess, false);
  doc["solver"] = json{{"tol", config.solver.tol},
                       {"alpha", config.solver.alpha},
                       {"beta", config.solver.beta},
                       {"delta", config.solver.delta},
                       {"max_iters", config.solver.max_iters},
                       {"max_backtracks", config.solver.max_backtracks}};
  return doc.dump(2) + "\n";
}

std::string describe(const ProblemConfig& config) {
  std::ostringstream out;
  out << "problem: " << (config.name.empty() ? "(unnamed)" : config.name) << "\n";
  out << "dimension: n = " << config.dimension << " (real state size "
      << 2 * config.dimension << ")\n";
  out << "controls: m = " << config.controls.size() << "\n";
  for (std::size_t j = 0; j < config.controls.size(); ++j) {
    out << "  channel " << j << ": ";
    if (config.controls[j].coupling.kind == CouplingKind::Linear) {
      out << "linear coupling\n";
    } else {
      out << "polynomial coupling, order "
          << config.controls[j].coupling.coefficients.size() - 1 << "\n";
    }
  }
  out << "horizon: T = " << config.horizon << ", grid: N = " << config.grid_steps
      << " (dt = " << config.horizon / config.grid_steps << ")\n";
  out << "input weight: ";
  switch (config.input_weight.kind) {
    case SignalKind::Constant:
      out << "constant " << config.input_weight.value << "\n";
      break;
    case SignalKind::BlackmanFlanked:
      out << "blackman-flanked, width " << config.input_weight.width << ", epsilon "
          << config.input_weight.epsilon << "\n";
      break;
    case SignalKind::Tabulated:
      out << "tabulated, " << config.input_weight.times.size() << " samples\n";
      break;
  }
  out << "initial guess: ";
  switch (config.initial_guess.kind) {
    case SignalKind::Constant:
      out << "constant " << config.initial_guess.value << "\n";
      break;
    case SignalKind::BlackmanFlanked:
      out << "blackman-flanked, amplitude " << config.initial_guess.value << ", width "
          << config.initial_guess.width << "\n";
      break;
    case SignalKind::Tabulated:
      out << "tabulated, " << config.initial_guess.times.size() << " samples\n";
      break;
  }
  if (config.forbidden) {
    out << "transient penalty: forbidden-state projector, weight "
        << config.forbidden->weight << "\n";
  } else {
    out << "transient penalty: none (P_lambda = 0)\n";
  }
  out << "solver: tol = " << config.solver.tol << ", alpha = " << config.solver.alpha
      << ", beta = " << config.solver.beta << ", delta = " << config.solver.delta
      << ", max_iters = " << config.solver.max_iters
      << ", max_backtracks = " << config.solver.max_backtracks << "\n";
  return out.str();
}

TimeGrid build_grid(const ProblemConfig& config) {
  return TimeGrid::uniform(config.horizon, config.grid_steps);
}

QuantumSystem build_system(const ProblemConfig& config) {
  QuantumSystem sys;
  sys.dim = config.dimension;
  sys.drift = embed_generator(config.drift);
  for (const ControlDesc& c : config.controls) {
    CouplingFunction f = c.coupling.kind == CouplingKind::Linear
                             ? CouplingFunction::linear()
                             : CouplingFunction::polynomial(c.coupling.coefficients);
    sys.channels.push_back(ControlChannel{embed_generator(c.hamiltonian), std::move(f)});
  }
  return sys;
}

CostSpec build_cost(const ProblemConfig& config) {
  const Eigen::Index n = config.dimension;
  CostSpec spec;
  if (config.forbidden) {
    const ComplexMatrix projector =
        config.forbidden->state * config.forbidden->state.adjoint();
    spec.state_penalty = config.forbidden->weight * embed_observable(projector);
  } else {
    spec.state_penalty = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  }
  const ComplexMatrix complement = ComplexMatrix::Identity(n, n) -
                                   config.target_state * config.target_state.adjoint();
  spec.terminal_penalty = embed_observable(complement);

  const int m = static_cast<int>(config.controls.size());
  const SignalDesc weight = config.input_weight;
  const double horizon = config.horizon;
  spec.input_weight = [weight, horizon, m](double t) -> Eigen::MatrixXd {
    double theta = 0.0;
    switch (weight.kind) {
      case SignalKind::Constant:
        theta = weight.value;
        break;
      case SignalKind::BlackmanFlanked:
        theta = eval_flanked_weight(weight, horizon, t);
        break;
      case SignalKind::Tabulated:
        theta = eval_tabulated(weight, t);
        break;
    }
    return theta * Eigen::MatrixXd::Identity(m, m);
  };
  return spec;
}

RealState build_initial_state(const ProblemConfig& config) {
  return embed_state(config.initial_state);
}

VectorSignal build_initial_guess(const ProblemConfig& config, const TimeGrid& grid) {
  const int m = static_cast<int>(config.controls.size());
  VectorSignal out{grid, {}};
  out.values.reserve(grid.node_count());
  for (int k = 0; k <= grid.steps; ++k) {
    const double t = grid.node(k);
    double level = 0.0;
    switch (config.initial_guess.kind) {
      case SignalKind::Constant:
        level = config.initial_guess.value;
        break;
      case SignalKind::BlackmanFlanked:
        level = eval_flanked_guess(config.initial_guess, config.horizon, t);
        break;
      case SignalKind::Tabulated:
        level = eval_tabulated(config.initial_guess, t);
        break;
    }
    out.values.push_back(Eigen::VectorXd::Constant(m, level));
  }
  return out;
}

double target_infidelity(const ProblemConfig& config, const RealState& x) {
  const ComplexKet psi = extract_state(x);
  const std::complex<double> overlap = config.target_state.adjoint() * psi;
  return 1.0 - std::norm(overlap);
}

}  // namespace qpronto
