#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpronto/solver.hpp"

namespace qpronto {

/// Configuration error with the offending field named in what().
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_, const std::string& message)
      : std::runtime_error(field_.empty() ? message : field_ + ": " + message),
        field(std::move(field_)) {}
};

inline constexpr int kConfigSchemaVersion = 1;

enum class CouplingKind { Linear, Polynomial };

struct CouplingDesc {
  CouplingKind kind = CouplingKind::Linear;
  std::vector<double> coefficients;  // polynomial only, lowest order first
};

struct ControlDesc {
  ComplexMatrix hamiltonian;
  CouplingDesc coupling;
};

enum class SignalKind { Constant, BlackmanFlanked, Tabulated };

/// Scalar shape description for the input weight and the initial guess.
struct SignalDesc {
  SignalKind kind = SignalKind::Constant;
  double value = 0.0;     // constant level, or blackman_flanked amplitude
  double width = 0.0;     // blackman_flanked window length
  double epsilon = 0.0;   // blackman_flanked weight regularization
  std::vector<double> times;   // tabulated
  std::vector<double> values;  // tabulated
};

struct ForbiddenStateDesc {
  ComplexKet state;
  double weight = 0.0;
};

struct ProblemConfig {
  std::string name;
  int dimension = 0;
  ComplexMatrix drift;  // drift Hamiltonian, rad/time
  std::vector<ControlDesc> controls;
  ComplexKet initial_state;
  ComplexKet target_state;
  std::optional<ForbiddenStateDesc> forbidden;
  double horizon = 0.0;
  int grid_steps = 0;
  SignalDesc input_weight;
  SignalDesc initial_guess;
  SolverConfig solver;  // grid is derived from horizon / grid_steps
};

/// Parses and validates a JSON config document. `origin` names the source in
/// error messages; parse errors are reported with line and column.
ProblemConfig parse_config(const std::string& text, const std::string& origin);

/// Reads the file and parses it. Throws ConfigError if unreadable.
ProblemConfig load_config(const std::string& path);

/// Serializes back to the JSON schema (used to echo the effective config).
std::string config_to_json(const ProblemConfig& config);

/// Human-readable summary of a validated config.
std::string describe(const ProblemConfig& config);

/// Built-in presets.
const std::string& preset_text(const std::string& name);
std::vector<std::string> preset_names();

// Assembly of solver inputs from a validated config.
TimeGrid build_grid(const ProblemConfig& config);
QuantumSystem build_system(const ProblemConfig& config);
CostSpec build_cost(const ProblemConfig& config);
RealState build_initial_state(const ProblemConfig& config);
VectorSignal build_initial_guess(const ProblemConfig& config, const TimeGrid& grid);

/// Phase-insensitive infidelity 1 - |<psi|phi>|^2 between a real-embedded
/// state and the config's target ket.
double target_infidelity(const ProblemConfig& config, const RealState& x);

}  // namespace qpronto
