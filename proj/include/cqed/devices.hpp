#pragma once

#include "cqed/hilbert.hpp"

namespace cqed {

// Transmon parameters. EJ and EC are energies divided by Planck's constant,
// in Hz. flux is the external flux in units of Phi0 (SQUID devices).
struct TransmonParams {
  double EJ = 0.0;      // Hz (E_J/h)
  double EC = 0.0;      // Hz (E_C/h)
  double ng = 0.0;      // offset charge, dimensionless
  double EJ_sum = 0.0;  // Hz, total Josephson energy of a SQUID pair
  double d_asym = 0.0;  // junction asymmetry in [0,1]
  double flux = 0.0;    // external flux in Phi0 units

  void validate() const;
  // |E_J(flux)| when SQUID parameters are set, else EJ. Hz.
  double effective_EJ() const;
};

struct ResonatorParams {
  double omega_r = 0.0;  // rad/s
  double kappa = 0.0;    // rad/s
  double Z_r = 50.0;     // Ohm
  double L = 0.0;        // H, optional (0 = unset)
  double C = 0.0;        // F, optional
  double l0 = 0.0;       // H/m, optional
  double c0 = 0.0;       // F/m, optional
  double length = 0.0;   // m, optional

  void validate() const;
};

struct ZeroPointScales {
  double phi_zpf = 0.0;  // Wb
  double q_zpf = 0.0;    // C
  double dV0 = 0.0;      // V
};

struct BBQMode {
  double omega_m = 0.0;          // rad/s
  double participation_p = 0.0;  // energy participation ratio in [0,1]
};

struct BBQKerr {
  Eigen::MatrixXd chi;        // rad/s, cross-Kerr chi_{m,n}
  std::vector<double> self_kerr;   // rad/s, K_m = chi_{m,m}/2
  std::vector<double> lamb_shift;  // rad/s, Delta_m = (1/2) sum_n chi_{m,n}
};

// Charge-basis transmon Hamiltonian H/hbar on |n>, n in [-ncut, ncut], with
// cos(phi) as half the sum of charge shift operators. Convergence in ncut is
// verified by doubling and comparing the lowest four eigenvalues.
Operator transmon_charge_hamiltonian(const TransmonParams& params, int ncut);

// Lowest charge-basis eigenfrequencies relative to the ground state, rad/s.
std::vector<double> transmon_charge_levels(const TransmonParams& params, int ncut, int count);

// Duffing-oscillator truncation: H/hbar = wq b'b - (Ec/2) b'b'bb with
// hbar*wq = sqrt(8 EC EJ) - EC.
Operator transmon_duffing_hamiltonian(const TransmonParams& params, int dim);

double duffing_frequency(const TransmonParams& params);  // rad/s

// E_J(flux) = EJ_sum cos(pi f) sqrt(1 + d^2 tan^2(pi f)); may be negative,
// callers expand about the potential minimum and take the magnitude.
double flux_tuned_EJ(double flux_in_phi0, double EJ_sum, double d_asym);

enum class ResonatorKind { half_wave, quarter_wave, rectangular_3d };

struct ResonatorGeometry {
  double v0 = 0.0;      // m/s, line phase velocity
  double length = 0.0;  // m, line length
  double a = 0.0, b = 0.0, d = 0.0;  // m, box dimensions
};

// Mode angular frequencies: lambda/2: (m+1) pi v0/d; lambda/4: odd multiples
// of pi v0/2d; 3D box: c sqrt((m pi/a)^2+(n pi/b)^2+(l pi/d)^2) over TE/TM
// index combinations, sorted ascending.
std::vector<double> resonator_mode_frequencies(ResonatorKind kind, const ResonatorGeometry& geometry,
                                               int count);

// Bose-Einstein occupation at frequency f (Hz) and temperature T (K).
double thermal_occupation(double freq_hz, double temperature_k);

ZeroPointScales lc_zero_point(double L, double C);

// Light-matter coupling from circuit parameters, rad/s.
double coupling_g(double omega_r, double cg_over_csigma, double EJ, double EC, double Z_r);
// Same quantity via the fine-structure-constant form; agrees algebraically.
double coupling_g_fine_structure(double omega_r, double cg_over_csigma, double EJ, double EC, double Z_r);

// Black-box cross-Kerr matrix chi_{m,n} = -hbar w_m w_n p_m p_n / (4 E_J).
// EJ in Hz (E_J/h).
BBQKerr bbq_cross_kerr(const std::vector<BBQMode>& modes, double EJ);

}  // namespace cqed
