#pragma once

#include <functional>

#include "cqed/core.hpp"

namespace cqed {

// Qubit-conditioned coherent amplitudes under a measurement drive.
// d alpha/dt = -i eps(t) - [i(delta_r +/- chi) + kappa/2] alpha, + for e.
struct PointerTrajectory {
  std::vector<double> times;      // s
  std::vector<Complex> alpha_g;
  std::vector<Complex> alpha_e;
  double delta_r = 0.0;           // rad/s
  double chi = 0.0;               // rad/s
  double kappa = 0.0;             // rad/s
};

using DriveFn = std::function<Complex(double)>;

// Integrates the pointer ODEs on the given grid. gamma1 > 0 applies the
// documented T1 approximation: the reported e trajectory is mixed toward
// the g trajectory with weight exp(-gamma1 t).
PointerTrajectory pointer_evolution(const DriveFn& epsilon, double delta_r, double chi, double kappa,
                                    const std::vector<double>& time_grid, double gamma1 = 0.0);

struct SteadyResponse {
  double A_g = 0.0, A_e = 0.0;      // amplitudes, 2 eps / sqrt((kappa/2)^2 + (delta_r -/+ chi)^2)
  double phi_g = 0.0, phi_e = 0.0;  // arctan((delta_r -/+ chi)/(kappa/2))
};

SteadyResponse steady_amplitude_phase(double epsilon, double delta_r, double chi, double kappa);

struct AmplifierStage {
  double gain = 1.0;            // power gain G >= 1
  double added_noise = 0.0;     // photon number N >= 0
  double transmissivity = 1.0;  // eta in (0,1] preceding the stage
};

struct HeterodyneConfig {
  double omega_IF = 0.0;  // rad/s
  double phi_LO = 0.0;    // rad
  double V_IF = 1.0;      // record scale
};

struct MeasurementChain {
  std::vector<AmplifierStage> stages;
  HeterodyneConfig heterodyne;
};

struct ChainNoise {
  double total_gain = 0.0;
  double N_T = 0.0;           // total added noise number, exact cascade
  double N_T_approx = 0.0;    // Friis-style large-gain limit (two-stage form)
  double eta = 0.0;           // 1 / (N_T + 1)
  double added_noise_A = 0.0; // ((G-1)/G)(N_T + 1/2) for the composite amp
  double eta_bar = 0.0;       // 1 / (2A + 1) <= 1/2
};

ChainNoise chain_noise(const MeasurementChain& chain);

// Weighting functions for the integrated record; defaults are the
// difference-signal weights |<X>_e - <X>_g|, |<P>_e - <P>_g|.
struct SnrWeights {
  std::function<double(double)> wX;
  std::function<double(double)> wP;
};

// Integrated-record signal-to-noise ratio up to tau_m. Per-quadrature white
// noise has effective variance 1/(4 eta) in the X = (a' + a)/2 convention;
// eta includes every contribution of the chain (ideal phase-preserving
// chains have eta <= 1/2).
double snr(const PointerTrajectory& trajectory, double eta, double tau_m,
           const SnrWeights* weights = nullptr);

double measurement_fidelity(double snr_value);  // 1 - erfc(SNR/2)

struct HeterodyneRecords {
  std::vector<double> I_g, Q_g;  // per-shot integrated quadratures, qubit in g
  std::vector<double> I_e, Q_e;
  double mean_I_g = 0.0, mean_Q_g = 0.0, mean_I_e = 0.0, mean_Q_e = 0.0;
  double noise_variance = 0.0;   // per quadrature
};

// Per-shot integrated (I, Q) samples for both preparations; Gaussian around
// the weighted trajectory means with variance 1/(4 eta) per quadrature.
// Bit-exact reproducible for a given seed.
HeterodyneRecords synthesize_heterodyne_records(const PointerTrajectory& trajectory, double eta,
                                                double tau_m, int n_shots, uint64_t seed,
                                                const SnrWeights* weights = nullptr);

// 1 - integral of min(P0, P1) from histograms of the records projected on
// the line joining the two means.
double histogram_fidelity(const HeterodyneRecords& records, int bins = 201);

// Chain efficiency from the information-dephasing relation eta = SNR^2/(4 beta_m),
// beta_m = 2 chi int Im[alpha_g alpha_e*] dt.
double efficiency_from_snr(double snr_value, const PointerTrajectory& trajectory, double chi);

// Recover the slowly varying quadratures from IF records via the rotation
// matrix R(t): X = (V_I cos - V_Q sin)/V_IF, P = -(V_I sin + V_Q cos)/V_IF.
void demodulate_iq(const std::vector<double>& times, const std::vector<double>& v_i,
                   const std::vector<double>& v_q, const HeterodyneConfig& config,
                   std::vector<double>& x_out, std::vector<double>& p_out);

}  // namespace cqed
