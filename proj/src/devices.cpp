#include "cqed/devices.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cqed {

void TransmonParams::validate() const {
  if (EJ < 0.0 || EJ_sum < 0.0)
    throw Error(ErrorKind::invalid_argument, "devices", "EJ must be non-negative");
  if (EC <= 0.0) throw Error(ErrorKind::invalid_argument, "devices", "EC must be positive");
  if (d_asym < 0.0 || d_asym > 1.0)
    throw Error(ErrorKind::invalid_argument, "devices", "junction asymmetry must be in [0,1]");
}

double TransmonParams::effective_EJ() const {
  if (EJ_sum > 0.0) return std::abs(flux_tuned_EJ(flux, EJ_sum, d_asym));
  return EJ;
}

void ResonatorParams::validate() const {
  if (omega_r <= 0.0) throw Error(ErrorKind::invalid_argument, "devices", "omega_r must be positive");
  if (kappa < 0.0) throw Error(ErrorKind::invalid_argument, "devices", "kappa must be non-negative");
  if (L > 0.0 && C > 0.0) {
    double w = 1.0 / std::sqrt(L * C);
    if (std::abs(w - omega_r) > 1e-9 * omega_r)
      throw Error(ErrorKind::invalid_argument, "devices", "omega_r inconsistent with 1/sqrt(LC)");
    double z = std::sqrt(L / C);
    if (std::abs(z - Z_r) > 1e-9 * Z_r)
      throw Error(ErrorKind::invalid_argument, "devices", "Z_r inconsistent with sqrt(L/C)");
  }
}

namespace {

Matrix charge_basis_matrix(double EJ, double EC, double ng, int ncut) {
  int dim = 2 * ncut + 1;
  Matrix h = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    double n = static_cast<double>(k - ncut);
    h(k, k) = two_pi * 4.0 * EC * (n - ng) * (n - ng);
    if (k + 1 < dim) {
      h(k, k + 1) = -two_pi * EJ / 2.0;
      h(k + 1, k) = -two_pi * EJ / 2.0;
    }
  }
  return h;
}

std::vector<double> lowest_eigenvalues(const Matrix& h, int count) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int k = 0; k < count && k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

}  // namespace

Operator transmon_charge_hamiltonian(const TransmonParams& params, int ncut) {
  params.validate();
  if (ncut < 5) throw Error(ErrorKind::invalid_dimension, "devices", "ncut must be >= 5");
  double ej = params.effective_EJ();
  Matrix h = charge_basis_matrix(ej, params.EC, params.ng, ncut);

  // Eigenvalues must be converged in the charge cutoff: doubling ncut may
  // change the lowest four by at most 1e-8 relative.
  auto ev = lowest_eigenvalues(h, 4);
  auto ev2 = lowest_eigenvalues(charge_basis_matrix(ej, params.EC, params.ng, 2 * ncut), 4);
  double scale = std::max(std::abs(ev2.front()), std::abs(ev2.back()));
  for (size_t k = 0; k < ev.size(); ++k) {
    if (std::abs(ev[k] - ev2[k]) > 1e-8 * scale)
      throw Error(ErrorKind::convergence, "devices",
                  "charge-basis spectrum not converged at ncut=" + std::to_string(ncut));
  }
  return Operator(HilbertSpace({2 * ncut + 1}), std::move(h), true);
}

std::vector<double> transmon_charge_levels(const TransmonParams& params, int ncut, int count) {
  Operator h = transmon_charge_hamiltonian(params, ncut);
  auto ev = lowest_eigenvalues(h.matrix(), count);
  double e0 = ev.front();
  for (auto& e : ev) e -= e0;
  return ev;
}

double duffing_frequency(const TransmonParams& params) {
  params.validate();
  double ej = params.effective_EJ();
  if (ej <= 0.0)
    throw Error(ErrorKind::invalid_argument, "devices", "Duffing expansion needs EJ > 0");
  return two_pi * (std::sqrt(8.0 * params.EC * ej) - params.EC);
}

Operator transmon_duffing_hamiltonian(const TransmonParams& params, int dim) {
  params.validate();
  if (dim < 3) throw Error(ErrorKind::invalid_dimension, "devices", "Duffing truncation needs dim >= 3");
  double wq = duffing_frequency(params);
  double ec = two_pi * params.EC;
  Matrix h = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n)
    h(n, n) = wq * n - 0.5 * ec * n * (n - 1);
  return Operator(HilbertSpace({dim}), std::move(h), true);
}

double flux_tuned_EJ(double flux_in_phi0, double EJ_sum, double d_asym) {
  double x = pi * flux_in_phi0;
  double c = std::cos(x);
  double s = std::sin(x);
  // cos * sqrt(1 + d^2 tan^2) written tan-free so half-integer flux is finite.
  double sign = (c >= 0.0) ? 1.0 : -1.0;
  return EJ_sum * sign * std::sqrt(c * c + d_asym * d_asym * s * s);
}

std::vector<double> resonator_mode_frequencies(ResonatorKind kind, const ResonatorGeometry& geometry,
                                               int count) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "devices", "mode count must be >= 1");
  std::vector<double> modes;
  switch (kind) {
    case ResonatorKind::half_wave: {
      if (geometry.v0 <= 0.0 || geometry.length <= 0.0)
        throw Error(ErrorKind::invalid_argument, "devices", "line geometry must be positive");
      double w0 = pi * geometry.v0 / geometry.length;  // 2*pi*v0/(2d)
      for (int m = 0; m < count; ++m) modes.push_back((m + 1) * w0);
      break;
    }
    case ResonatorKind::quarter_wave: {
      if (geometry.v0 <= 0.0 || geometry.length <= 0.0)
        throw Error(ErrorKind::invalid_argument, "devices", "line geometry must be positive");
      double w0 = pi * geometry.v0 / (2.0 * geometry.length);  // 2*pi*v0/(4d)
      for (int m = 0; m < count; ++m) modes.push_back((2 * m + 1) * w0);
      break;
    }
    case ResonatorKind::rectangular_3d: {
      if (geometry.a <= 0.0 || geometry.b <= 0.0 || geometry.d <= 0.0)
        throw Error(ErrorKind::invalid_argument, "devices", "box dimensions must be positive");
      // Enumerate small index triples; at most one index may vanish.
      int nmax = count + 3;
      for (int m = 0; m <= nmax; ++m)
        for (int n = 0; n <= nmax; ++n)
          for (int l = 0; l <= nmax; ++l) {
            int zeros = (m == 0) + (n == 0) + (l == 0);
            if (zeros > 1) continue;
            double km = m * pi / geometry.a;
            double kn = n * pi / geometry.b;
            double kl = l * pi / geometry.d;
            modes.push_back(speed_of_light * std::sqrt(km * km + kn * kn + kl * kl));
          }
      std::sort(modes.begin(), modes.end());
      break;
    }
  }
  if (static_cast<int>(modes.size()) > count) modes.resize(static_cast<size_t>(count));
  return modes;
}

double thermal_occupation(double freq_hz, double temperature_k) {
  if (freq_hz <= 0.0) throw Error(ErrorKind::invalid_argument, "devices", "frequency must be positive");
  if (temperature_k < 0.0)
    throw Error(ErrorKind::invalid_argument, "devices", "temperature must be non-negative");
  if (temperature_k == 0.0) return 0.0;
  double x = planck_h * freq_hz / (boltzmann_k * temperature_k);
  return 1.0 / std::expm1(x);
}

ZeroPointScales lc_zero_point(double L, double C) {
  if (L <= 0.0 || C <= 0.0) throw Error(ErrorKind::invalid_argument, "devices", "L and C must be positive");
  double omega = 1.0 / std::sqrt(L * C);
  double z = std::sqrt(L / C);
  ZeroPointScales s;
  s.phi_zpf = std::sqrt(hbar * z / 2.0);
  s.q_zpf = std::sqrt(hbar / (2.0 * z));
  s.dV0 = std::sqrt(hbar * omega / (2.0 * C));
  return s;
}

double coupling_g(double omega_r, double cg_over_csigma, double EJ, double EC, double Z_r) {
  if (omega_r <= 0.0 || EJ <= 0.0 || EC <= 0.0 || Z_r <= 0.0 || cg_over_csigma < 0.0)
    throw Error(ErrorKind::invalid_argument, "devices", "coupling_g arguments must be positive");
  return omega_r * cg_over_csigma * std::pow(EJ / (2.0 * EC), 0.25) *
         std::sqrt(pi * Z_r / resistance_quantum);
}

double coupling_g_fine_structure(double omega_r, double cg_over_csigma, double EJ, double EC, double Z_r) {
  if (omega_r <= 0.0 || EJ <= 0.0 || EC <= 0.0 || Z_r <= 0.0 || cg_over_csigma < 0.0)
    throw Error(ErrorKind::invalid_argument, "devices", "coupling_g arguments must be positive");
  double alpha = impedance_vacuum / (2.0 * resistance_quantum);
  return omega_r * cg_over_csigma * std::pow(EJ / (2.0 * EC), 0.25) *
         std::sqrt(Z_r / impedance_vacuum) * std::sqrt(two_pi * alpha);
}

BBQKerr bbq_cross_kerr(const std::vector<BBQMode>& modes, double EJ) {
  if (EJ <= 0.0) throw Error(ErrorKind::invalid_argument, "devices", "EJ must be positive");
  const int m = static_cast<int>(modes.size());
  for (const auto& mode : modes)
    if (mode.participation_p < 0.0 || mode.participation_p > 1.0)
      throw Error(ErrorKind::invalid_argument, "devices", "participation ratio must be in [0,1]");
  BBQKerr out;
  out.chi = Eigen::MatrixXd::Zero(m, m);
  double ej_angular = two_pi * EJ;  // E_J/hbar in rad/s
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.chi(i, j) = -modes[static_cast<size_t>(i)].omega_m * modes[static_cast<size_t>(j)].omega_m *
                      modes[static_cast<size_t>(i)].participation_p *
                      modes[static_cast<size_t>(j)].participation_p / (4.0 * ej_angular);
  out.self_kerr.resize(static_cast<size_t>(m));
  out.lamb_shift.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    out.self_kerr[static_cast<size_t>(i)] = out.chi(i, i) / 2.0;
    out.lamb_shift[static_cast<size_t>(i)] = 0.5 * out.chi.row(i).sum();
  }
  return out;
}

}  // namespace cqed
