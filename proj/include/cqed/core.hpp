#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA values. Energies are handled as E/h in Hz throughout, so these
// mostly appear in zero-point and thermal formulas.
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann_k = 1.380649e-23;    // J/K
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double speed_of_light = 2.99792458e8; // m/s
inline constexpr double resistance_quantum = planck_h / (elementary_charge * elementary_charge);  // h/e^2
inline constexpr double impedance_vacuum = 376.730313668;  // sqrt(mu0/eps0)

enum class ErrorKind {
  invalid_dimension,
  composition,
  space_mismatch,
  invalid_state,
  convergence,
  straddling_regime,
  resonance,
  degeneracy,
  stiffness,
  steady_state_multiplicity,
  leakage,
  undefined_efficiency,
  invalid_argument,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind), module_(module) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::composition: return "composition";
    case ErrorKind::space_mismatch: return "space-mismatch";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::straddling_regime: return "straddling-regime";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::steady_state_multiplicity: return "steady-state-multiplicity";
    case ErrorKind::leakage: return "leakage";
    case ErrorKind::undefined_efficiency: return "undefined-efficiency";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace cqed
