#pragma once

#include <functional>

#include "cqed/hilbert.hpp"

namespace cqed {

// Time-dependent Hamiltonian term: coefficient(t) * op + h.c.
struct DriveTerm {
  Operator op;
  std::function<Complex(double)> coefficient;
};

struct CollapseTerm {
  double rate = 0.0;  // rad/s
  Operator op;
};

// H(t)/hbar = hamiltonian + sum_k [c_k(t) op_k + h.c.]; dissipation through
// (rate, collapse operator) pairs. Frames are the caller's choice; nothing
// is rotated implicitly.
struct LindbladModel {
  Operator hamiltonian;
  std::vector<CollapseTerm> collapse;
  std::vector<DriveTerm> drives;

  bool time_dependent() const { return !drives.empty(); }
  void validate() const;
  // Right-hand side of the master equation at time t.
  Matrix rhs(const Matrix& rho, double t) const;
};

struct DissipationRates {
  double kappa = 0.0, gamma = 0.0, gamma_phi = 0.0;  // rad/s, bare rates
  double n_bar_kappa = 0.0, n_bar_gamma = 0.0;
  double gamma_Purcell = 0.0;          // (g/Delta)^2 kappa
  double gamma_Purcell_interp = 0.0;   // kappa g^2 / [(kappa/2)^2 + Delta^2]
  double kappa_inverse_Purcell = 0.0;  // (g/Delta)^2 gamma
  double gamma_Delta = 0.0;            // 2 (g/Delta)^2 gamma_phi
  double gamma1 = 0.0, gamma2 = 0.0;   // totals incl. Purcell
  double T1 = 0.0, T2 = 0.0;           // s
  bool dispersive_warning = false;     // (g/Delta)^2 > 0.1
};

struct LeakageWarning {
  double time = 0.0;
  int subsystem = 0;
  double max_population = 0.0;
};

struct EvolutionResult {
  std::vector<double> times;                    // s
  std::vector<Matrix> states;                   // stored when requested
  Eigen::MatrixXcd expectations;                // times x observables
  std::vector<LeakageWarning> leakage_warnings;
};

enum class EvolveMethod { automatic, runge_kutta, eigendecomposition };

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double leakage_threshold = 1e-6;
  bool store_states = false;
  EvolveMethod method = EvolveMethod::automatic;
  // Eigendecomposition path is used for time-independent models up to this
  // Hilbert dimension when method == automatic.
  int eig_dim_limit = 48;
  size_t max_steps = 80'000'000;
};

EvolutionResult evolve(const LindbladModel& model, const QuantumState& rho0,
                       const std::vector<double>& time_grid, const std::vector<Operator>& observables,
                       const EvolveOptions& options = {});

// D[op] rho = op rho op' - {op'op, rho}/2.
Matrix dissipator(const Operator& op, const QuantumState& rho);
Matrix dissipator(const Operator& op, const Matrix& rho);

// Vectorized Liouvillian (column stacking) of the time-independent part.
Matrix liouvillian(const LindbladModel& model);

// Unique steady state of a time-independent model; raises
// steady_state_multiplicity when the zero eigenvalue is degenerate.
QuantumState steady_state(const LindbladModel& model);

DissipationRates dispersive_rates(double g, double Delta, double kappa, double gamma,
                                  double gamma_phi);

struct TransmissionSpec {
  double omega_r = 0.0, omega_q = 0.0, g = 0.0;          // rad/s
  double kappa = 0.0, gamma1 = 0.0, gamma_phi = 0.0;     // rad/s
  double n_bar_kappa = 0.0;
  double epsilon = 0.0;  // drive amplitude, rad/s; kept in the weak regime
  int resonator_dim = 5;
};

enum class TransmissionMethod { three_level_formula, master_equation };

struct Spectrum {
  std::vector<double> omega_d;     // rad/s
  std::vector<double> magnitude2;  // |<a>|^2
  std::vector<double> phase;       // arg <a>
};

// Weak-drive steady-state <a> in the three-level truncation, closed form.
Complex transmission_amplitude(const TransmissionSpec& spec, double omega_d);

// Steady-state transmitted amplitude vs drive frequency. The closed form is
// exact at weak drive in the three-level truncation; the master-equation
// mode keeps the full two-level-qubit model and thermal photons.
Spectrum transmission_sweep(const TransmissionSpec& spec, const std::vector<double>& drive_freqs,
                            TransmissionMethod method);

// Index of local maxima after quadratic refinement; returns refined
// frequencies sorted by position.
std::vector<double> spectrum_peaks(const Spectrum& s, double prominence_fraction = 0.02);

enum class LineshapeMethod { formula, master_equation };

// Steady-state excited-state population of a driven qubit vs drive detuning.
std::vector<double> qubit_lineshape(double OmegaR, double gamma1, double gamma_phi,
                                    const std::vector<double>& detuning_grid, LineshapeMethod method);

double lineshape_fwhm(double OmegaR, double gamma1, double gamma_phi);

struct AcStarkSpec {
  double chi = 0.0;      // rad/s
  double kappa = 0.0;    // rad/s
  double gamma1 = 0.0;   // rad/s
  double gamma_phi = 0.0;
  double delta_r = 0.0;  // omega_r - omega_measure, rad/s
  double epsilon = 0.0;  // measurement drive amplitude, rad/s
  double OmegaR = 0.0;   // spectroscopy Rabi amplitude, rad/s
  int resonator_dim = 10;
};

// Joint qubit-resonator steady state: Pe vs spectroscopy detuning from the
// Lamb-shifted qubit frequency.
std::vector<double> two_tone_ac_stark(const AcStarkSpec& spec, const std::vector<double>& detuning_grid);

struct MeasurementDephasing {
  std::vector<double> gamma_m_t;   // 2 chi Im[alpha_g alpha_e*]
  double gamma_m_steady = 0.0;     // kappa |alpha_e - alpha_g|^2 / 2 at the end
  double gamma_m_formula = 0.0;    // kappa chi^2 (n_g + n_e) / (delta_r^2 + chi^2 + (kappa/2)^2)
};

MeasurementDephasing measurement_dephasing_rate(const std::vector<Complex>& alpha_g,
                                                const std::vector<Complex>& alpha_e, double chi,
                                                double kappa, double delta_r);

}  // namespace cqed
