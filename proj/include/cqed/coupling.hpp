#pragma once

#include "cqed/hilbert.hpp"

namespace cqed {

// Transmon-resonator system; subsystem order is [transmon, resonator].
// EC is E_C/h in Hz; frequencies and g are angular (rad/s).
struct RabiSystem {
  int transmon_dim = 2;
  int resonator_dim = 2;
  double omega_r = 0.0;  // rad/s
  double omega_q = 0.0;  // rad/s
  double EC = 0.0;       // Hz
  double g = 0.0;        // rad/s
  bool rwa = true;

  void validate() const;
  HilbertSpace space() const { return HilbertSpace({transmon_dim, resonator_dim}); }
};

struct DispersiveParams {
  double chi = 0.0;              // rad/s, two-level dispersive shift
  std::vector<double> chi_j;     // rad/s, per-level dispersive shifts
  std::vector<double> Lambda_j;  // rad/s, per-level Lamb shifts
  double omega_r_dressed = 0.0;  // rad/s
  double omega_q_dressed = 0.0;  // rad/s
  double K_a = 0.0;              // rad/s, resonator self-Kerr
  double K_b = 0.0;              // rad/s, transmon self-Kerr
  double chi_ab = 0.0;           // rad/s, cross-Kerr
  double Delta = 0.0;            // rad/s, qubit-resonator detuning
  double lambda = 0.0;           // g/Delta
  std::vector<double> n_crit;    // per-level critical photon number
};

// Arbitrary multilevel atom coupled to one mode. coupling(i,j) is the
// amplitude g_ij = <i|B|j>/hbar (rad/s) attached to |i><j| a^dag; for a
// Hermitian coupling operator g_ij = g_ji*.
struct MultilevelAtom {
  std::vector<double> level_energies;  // rad/s
  Matrix coupling;                     // rad/s
};

struct JCDoublet {
  double E_lower = 0.0;  // rad/s (energy / hbar)
  double E_upper = 0.0;  // rad/s
  double theta_n = 0.0;  // mixing angle, rad
};

struct SchriefferWolffResult {
  Matrix generator;    // S^(1), anti-Hermitian, block off-diagonal
  Matrix effective_h;  // H0 + PVP + H^(2), block-diagonal
  bool gap_warning = false;  // 2 max|V_offblock| >= minimum inter-subspace gap
};

// H/hbar of the transmon-resonator system. rwa=false uses the full
// -g (b' - b)(a' - a) coupling, rwa=true the exchange form g (b'a + b a').
Operator rabi_hamiltonian(const RabiSystem& sys);

// Closed-form JC doublet of the n-excitation manifold (n >= 1). The ground
// state sits at -omega_q/2 in this convention.
JCDoublet jc_spectrum(int n, double omega_r, double omega_q, double g);

// Bogoliubov-like unitary diagonalizing the two-level RWA (JC) Hamiltonian,
// exp[Lambda(N_T)(a' sigma- - a sigma+)].
Operator jc_diagonalizing_unitary(const RabiSystem& sys);

// Second-order Schrieffer-Wolff dispersive parameters for a transmon
// (Duffing ladder) coupled to one mode. Raises straddling_regime when
// 0 < Delta < E_C/hbar. `levels` sets how many chi_j/Lambda_j to report.
DispersiveParams dispersive_params_sw(double omega_r, double omega_q, double EC, double g,
                                      int levels = 4);

struct BogoliubovDressed {
  double omega_r_tilde = 0.0;  // rad/s
  double omega_q_tilde = 0.0;  // rad/s
  double Lambda_angle = 0.0;   // rad
};

// Exact normal-mode frequencies of the linear exchange-coupled pair.
BogoliubovDressed bogoliubov_dressed(double omega_r, double omega_q, double g);

struct KerrParams {
  double K_a = 0.0;     // rad/s
  double K_b = 0.0;     // rad/s
  double chi_ab = 0.0;  // rad/s
};

KerrParams kerr_params(double omega_r, double omega_q, double EC, double g);

struct MultilevelShifts {
  std::vector<double> Lambda_j;  // rad/s
  std::vector<double> chi_j;     // rad/s
};

MultilevelShifts multilevel_dispersive(const MultilevelAtom& atom, double omega_r);

// Generic second-order Schrieffer-Wolff in the eigenbasis of H0.
// `energies` are the H0 eigenvalues (rad/s) and `subspace` assigns each
// basis state to a block; V couples the blocks.
SchriefferWolffResult schrieffer_wolff_order2(const RealVector& energies, const Matrix& v,
                                              const std::vector<int>& subspace);

// Dressed-level table for a Hermitian H on a [transmon, resonator] space:
// entry (j, n) is the eigenvalue whose eigenvector has maximum overlap with
// bare |j, n>. Ties are resolved by descending overlap, then energy order.
Eigen::MatrixXd dressed_level_table(const Operator& h);

// chi_exact = (E(e,1) - E(e,0) - E(g,1) + E(g,0)) / 2 from dense
// diagonalization of the RWA Hamiltonian.
double chi_exact_from_diagonalization(const RabiSystem& sys);

}  // namespace cqed
