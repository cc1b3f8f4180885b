#pragma once

#include "cqed/hilbert.hpp"

namespace cqed {

// Conventions: alpha = x + i p, X = (a' + a)/2, [X, P] = i/2. Vacuum has
// variance 1/4 per quadrature in this normalization.
struct PhaseSpaceGrid {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int resolution = 101;  // points per axis

  void validate() const;
  double x(int i) const { return x_min + (x_max - x_min) * i / (resolution - 1); }
  double p(int j) const { return p_min + (p_max - p_min) * j / (resolution - 1); }
  double dx() const { return (x_max - x_min) / (resolution - 1); }
  double dp() const { return (p_max - p_min) / (resolution - 1); }
};

struct PhaseSpaceFunction {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;  // indexed (i, j) = (x, p)

  double integral() const;
};

struct SqueezeParams {
  double r = 0.0;      // squeezing parameter >= 0
  double theta = 0.0;  // squeezing angle, rad
};

struct JPAParams {
  double omega_0 = 0.0;    // rad/s
  double K = 0.0;          // rad/s, Kerr (negative for a JPA)
  double epsilon_p = 0.0;  // rad/s, pump amplitude
  double omega_p = 0.0;    // rad/s, pump frequency
  double kappa = 0.0;      // rad/s, single-photon loss (enters the threshold)
};

struct JPAEffective {
  double delta = 0.0;           // omega_0 + 2|alpha|^2 K - omega_p
  Complex epsilon_2{0.0, 0.0};  // alpha^2 K, two-photon pump amplitude
  Complex alpha{0.0, 0.0};      // working-point displacement
  bool below_threshold = true;  // |eps_2| < sqrt(delta^2 + (kappa/2)^2)
  bool bistable = false;        // multiple real photon-number fixed points
  std::vector<double> all_photon_solutions;  // |alpha|^2 roots, ascending
};

// Truncated coherent state; leakage above `leakage_tol` in the dropped tail
// raises an error.
QuantumState coherent_state(Complex alpha, int dim, double leakage_tol = 1e-8);
Operator displacement_operator(Complex alpha, int dim);

PhaseSpaceFunction wigner(const QuantumState& state, const PhaseSpaceGrid& grid);
PhaseSpaceFunction husimi_q(const QuantumState& state, const PhaseSpaceGrid& grid);

// Gaussian smoothing of W by the vacuum Wigner function; equals Q on the
// same grid up to discretization.
PhaseSpaceFunction convolve_with_vacuum(const PhaseSpaceFunction& w);

struct Marginal {
  std::vector<double> quadrature;
  std::vector<double> density;
};

// Distribution of X_phi = X cos(phi) + P sin(phi), integrating the function
// along the orthogonal direction with bilinear interpolation.
Marginal marginal(const PhaseSpaceFunction& f, double phi);

Operator squeeze_operator(const SqueezeParams& params, int dim);

// Variance of X_phi for squeezed vacuum in the Delta X^2_vac = 1/2
// normalization: (exp(2r) sin^2 + exp(-2r) cos^2)/2 with phi~ = phi - theta/2.
double squeezed_vacuum_variance(const SqueezeParams& params, double phi);
double squeezing_level_db(const SqueezeParams& params, double phi);

// Two-mode squeeze S12 = exp(z* a1 a2 - z a1' a2'); the reduced single-mode
// state of S12|00> is thermal with mean photon number sinh^2 r.
Operator two_mode_squeeze_operator(const SqueezeParams& params, int dim1, int dim2);

JPAEffective jpa_effective(const JPAParams& params);

}  // namespace cqed
