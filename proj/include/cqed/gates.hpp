#pragma once

#include <functional>

#include "cqed/hilbert.hpp"

namespace cqed {

enum class PulseShape { square, gaussian, gaussian_drag, custom };

// Drive envelope in the frame rotating at the carrier. Gaussian shapes are
// truncated at +/-2 sigma and offset-subtracted so they start and end at 0.
struct DriveEnvelope {
  PulseShape shape = PulseShape::square;
  double amplitude = 0.0;         // rad/s, peak epsilon
  double duration = 0.0;          // s
  double sigma = 0.0;             // s, Gaussian width (0 -> duration/4)
  double drag_coefficient = 0.0;  // dimensionless, scales 1/(EC/hbar)
  double phase = 0.0;             // rad, phi_d; virtual Z gates are frame
                                  // bookkeeping: offset this on later pulses
  double detuning = 0.0;          // rad/s, qubit-drive detuning in this frame
  std::function<Complex(double)> custom;

  // Complex envelope eps_I(t) + i eps_Q(t); EC_angular feeds the DRAG
  // quadrature scale.
  Complex value(double t, double EC_angular) const;
  double pulse_area(double EC_angular) const;  // integral of eps_I
};

// Gaussian envelope with the derivative quadrature eps_Q = c * d(eps_I)/dt / (EC/hbar).
DriveEnvelope drag_envelope(double amplitude, double duration, double sigma, double coefficient);

struct GateResult {
  Matrix unitary;                   // computational-subspace projection
  double leakage = 0.0;             // 1 - Tr(U'U)/d over the subspace
  double conditional_phase = 0.0;   // rad, two-qubit gates
  std::vector<double> phase_table;  // {phi01, phi10, phi11} when applicable
  double fidelity = 0.0;            // average gate fidelity vs the target
};

// (|Tr(target' u)|^2 + d) / (d (d + 1)); u and target d x d.
double average_gate_fidelity(const Matrix& u, const Matrix& target);

// Fixed-step RK4 propagator for dU/dt = -i [H0 + sum c_k(t) A_k + h.c.] U.
Matrix propagate_schrodinger(
    const Matrix& h0,
    const std::vector<std::pair<Matrix, std::function<Complex(double)>>>& drives, double t0,
    double t1, int steps);

// Resonant drive on a Duffing transmon in the rotating frame; projects the
// propagator on the first two levels. With gamma rates the fidelity is the
// average fidelity of the Lindblad channel instead.
GateResult single_qubit_gate(const DriveEnvelope& envelope, int transmon_dim, double EC,
                             const Matrix& target, double gamma1 = 0.0, double gamma_phi = 0.0);

struct AcStarkPhase {
  double phase = 0.0;   // rad, accumulated relative Z phase (signed)
  bool warning = false; // OmegaR/delta_q above 0.3
};

// Off-resonant-drive Z rotation: phase = -(EC/2 hbar)(OmegaR/delta_q)^2 * duration.
AcStarkPhase ac_stark_z(double OmegaR, double delta_q, double EC, double duration);

// Direct capacitive exchange J from circuit energies (all in Hz); rad/s out.
double exchange_J(double EC1, double EC2, double ECc, double EJ1, double EJ2);

// Exchange propagator in the resonant two-qubit frame at time t.
GateResult iswap_gate(double J, double t);
Matrix sqrt_iswap_target();
Matrix iswap_target();

// Residual conditional-phase rate when the qubits are detuned: J^2/Delta12.
double exchange_off_state_zz(double J, double Delta12);

// Resonator-mediated exchange, J = (g1 g2 / 2)(1/Delta1 + 1/Delta2).
double mediated_J(double g1, double g2, double Delta1, double Delta2);

struct CzProtocol {
  bool sudden = true;
  double delta_max = 0.0;          // rad/s, start/end 11-02 detuning (adiabatic)
  double duration = 0.0;           // s (adiabatic; sudden uses h/zeta)
  double leakage_threshold = 1e-3;
};

// 11-02 phase gate in the {00,01,10,11,02} model with coupling sqrt(2) J on
// the 11-02 pair. Sudden protocol dwells h/zeta at the anticrossing.
GateResult cz_11_02(double J, const CzProtocol& protocol);

struct CrossResonanceCoefficients {
  double x1 = 0.0;      // rad/s, sigma_x1 amplitude (= epsilon)
  double x2 = 0.0;      // rad/s, sigma_x2 amplitude (-epsilon J')
  double zx = 0.0;      // rad/s, sigma_z1 sigma_x2 amplitude
  double zz = 0.0;      // rad/s, sigma_z1 sigma_z2 amplitude (chi12/2)
  double chi12 = 0.0;   // rad/s
  double Jprime = 0.0;  // dimensionless
};

// Effective CR Hamiltonian coefficients for two transmons with exchange J,
// driving qubit 1 at the frequency of qubit 2. ECs in Hz.
CrossResonanceCoefficients cross_resonance_effective(double J, double Delta12, double EC1, double EC2,
                                                     double epsilon);

struct RipResult {
  std::vector<double> rate;  // rad/s, -2 chi1 chi2 |alpha(t)|^2 / delta_r
  double phase = 0.0;        // rad, integral of the rate
  bool warning = false;      // delta_r not >> kappa
};

RipResult rip_zz_rate(double chi1, double chi2, const std::vector<double>& times,
                      const std::vector<Complex>& alpha, double delta_r, double kappa = 0.0);

struct SidebandCoupling {
  int n = 0;                      // resonant sideband index
  double residual = 0.0;          // rad/s, n omega_m - Delta12
  double effective_coupling = 0.0;  // rad/s, J * J_n(eps/omega_m)
};

SidebandCoupling parametric_sideband(double J, double epsilon_mod, double omega_mod, double Delta12);

}  // namespace cqed
