#include "qpronto/config.hpp"

#include <map>
#include <stdexcept>

namespace qpronto {

namespace {

// Pi-pulse state transfer |0> -> |1> on a single qubit: drift -(1/2) sigma_z
// (omega = 1), one sigma_x channel with linear coupling, horizon 5, and a
// Blackman-flanked input weight that pins the pulse to zero at both ends.
const std::string kQubitPiPulse = R"json({
  "schema_version": 1,
  "name": "qubit_pi_pulse",
  "dimension": 2,
  "drift_hamiltonian": {
    "re": [[-0.5, 0.0], [0.0, 0.5]],
    "im": [[0.0, 0.0], [0.0, 0.0]]
  },
  "control_hamiltonians": [
    {
      "matrix": {
        "re": [[0.0, 1.0], [1.0, 0.0]],
        "im": [[0.0, 0.0], [0.0, 0.0]]
      },
      "coupling": {"kind": "linear"}
    }
  ],
  "initial_state": {"re": [1.0, 0.0], "im": [0.0, 0.0]},
  "target_state": {"re": [0.0, 1.0], "im": [0.0, 0.0]},
  "horizon": 5.0,
  "grid_steps": 5000,
  "input_weight": {"kind": "blackman_flanked", "width": 0.6, "epsilon": 1e-6},
  "initial_guess": {"kind": "blackman_flanked", "amplitude": 0.2, "width": 0.6},
  "solver": {
    "tol": 1e-2,
    "alpha": 0.4,
    "beta": 0.7,
    "delta": 0.6,
    "max_iters": 50,
    "max_backtracks": 40
  }
})json";

const std::map<std::string, std::string>& preset_table() {
  static const std::map<std::string, std::string> table = {
      {"qubit_pi_pulse", kQubitPiPulse},
  };
  return table;
}

}  // namespace

const std::string& preset_text(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_table()) names.push_back(name);
  return names;
}

}  // namespace qpronto
