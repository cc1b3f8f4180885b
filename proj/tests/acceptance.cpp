// Acceptance suite: one check per numbered criterion, each printing a
// single PASS/FAIL line with the measured values. Run all criteria with no
// arguments or a single one with --criterion N.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqed/codes.hpp"
#include "cqed/coupling.hpp"
#include "cqed/devices.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/gates.hpp"
#include "cqed/phasespace.hpp"
#include "cqed/readout.hpp"
#include "cqed/scenarios.hpp"

using namespace cqed;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    detail += (detail.empty() ? "" : "; ") + what + (cond ? " [ok]" : " [FAILED]");
  }
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    if (y[k] <= 0) continue;
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_decay(const std::vector<double>& t, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t k = 0; k < t.size(); ++k) {
    if (y[k] <= 0) continue;
    double ly = std::log(y[k]);
    sx += t[k];
    sy += ly;
    sxx += t[k] * t[k];
    sxy += t[k] * ly;
    ++n;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    ma += a[k] / a.size();
    mb += b[k] / b.size();
  }
  double num = 0, da = 0, db = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - ma) * (b[k] - mb);
    da += (a[k] - ma) * (a[k] - ma);
    db += (b[k] - mb) * (b[k] - mb);
  }
  return num / std::sqrt(da * db);
}

// Regularized upper incomplete gamma Q(s, x) for the chi-squared p-value.
double gamma_q(double s, double x) {
  if (x < 0.0 || s <= 0.0) return 0.0;
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) {
    // Series for P(s,x), Q = 1 - P.
    double sum = 1.0 / s, term = sum;
    for (int n = 1; n < 500; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    double p = sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    return 1.0 - p;
  }
  // Continued fraction for Q.
  double b = x + 1.0 - s, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

// ---------------------------------------------------------------------------

Check criterion_1() {
  Check c;
  double ec = 0.25e9;
  TransmonParams p{50.0 * ec, ec, 0.0, 0.0, 0.0, 0.0};
  auto levels = transmon_charge_levels(p, 30, 3);
  double w01 = levels[1];
  double asymptotic = two_pi * (std::sqrt(8.0 * 50.0) * ec - ec);
  c.require(std::abs(w01 - asymptotic) / asymptotic < 0.02,
            "w01 vs sqrt(8 EC EJ) - EC: " + fmt(std::abs(w01 - asymptotic) / asymptotic * 100) + "%");

  // Charge-basis anharmonicity against -EC. The exact value at EJ/EC = 50 is
  // -1.1492 EC (next-order correction beyond the Duffing expansion), so the
  // stated 10% tolerance is not attainable; reported honestly.
  double anharm = (levels[2] - levels[1]) - levels[1];
  double rel = std::abs(anharm + two_pi * ec) / (two_pi * ec);
  c.require(rel < 0.10, "charge-basis anharmonicity vs -EC: " + fmt(rel * 100) + "% (exact physics: 14.9%)");

  auto dispersion = [&](double ratio) {
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k <= 20; ++k) {
      TransmonParams q{ratio * ec, ec, k / 20.0, 0.0, 0.0, 0.0};
      double w = transmon_charge_levels(q, 25, 2)[1];
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    return hi - lo;
  };
  double ratio = dispersion(5.0) / dispersion(50.0);
  c.require(ratio > 1e4, "charge dispersion ratio EJ/EC 5 vs 50: " + fmt(ratio));
  return c;
}

Check criterion_2() {
  Check c;
  double omega_r = two_pi * 6e9, omega_q = two_pi * 5.1e9, g = two_pi * 130e6;
  int nr = 14;
  RabiSystem sys;
  sys.transmon_dim = 2;
  sys.resonator_dim = nr;
  sys.omega_r = omega_r;
  sys.omega_q = omega_q;
  sys.g = g;
  sys.rwa = true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rabi_hamiltonian(sys).matrix(), Eigen::EigenvaluesOnly);
  // Doublet energies carry the excited-manifold global +wr/2 shift of the
  // quoted closed form; the ground state sits at -wq/2.
  std::vector<double> closed{-omega_q / 2.0};
  for (int n = 1; n <= 10; ++n) {
    JCDoublet d = jc_spectrum(n, omega_r, omega_q, g);
    closed.push_back(d.E_lower);
    closed.push_back(d.E_upper);
  }
  std::sort(closed.begin(), closed.end());
  double worst = 0.0;
  for (size_t k = 0; k < closed.size(); ++k) {
    double shift = (k == 0) ? 0.0 : omega_r / 2.0;
    double numeric = es.eigenvalues()(static_cast<Eigen::Index>(k)) - omega_q / 2.0 + shift;
    worst = std::max(worst, std::abs(numeric - closed[k]) / std::abs(closed.back()));
  }
  c.require(worst < 1e-10, "closed form vs dense diagonalization, worst rel err " + fmt(worst));

  double worst_split = 0.0;
  for (int n = 1; n <= 10; ++n) {
    JCDoublet d = jc_spectrum(n, omega_r, omega_r, g);
    double split = d.E_upper - d.E_lower;
    worst_split = std::max(worst_split,
                           std::abs(split - 2.0 * g * std::sqrt(static_cast<double>(n))) / split);
  }
  c.require(worst_split < 1e-12, "resonant splitting 2 g sqrt(n), worst rel err " + fmt(worst_split));
  return c;
}

Check criterion_3() {
  Check c;
  double omega_r = two_pi * 7e9, ec = 0.3e9;
  double worst = 0.0;
  for (double delta_sign : {1.0, -1.0})
    for (double ratio : {0.02, 0.05}) {
      double delta = delta_sign * two_pi * 1.5e9;
      double g = std::abs(delta) * ratio;
      RabiSystem sys;
      sys.transmon_dim = 5;
      sys.resonator_dim = 5;
      sys.omega_r = omega_r;
      sys.omega_q = omega_r + delta;
      sys.EC = ec;
      sys.g = g;
      double chi_ex = chi_exact_from_diagonalization(sys);
      double chi_sw = dispersive_params_sw(omega_r, omega_r + delta, ec, g).chi;
      worst = std::max(worst, std::abs(chi_sw - chi_ex) / std::abs(chi_ex));
    }
  c.require(worst < 0.05, "chi SW vs exact dressed levels, worst " + fmt(worst * 100) + "%");

  // Independent Rayleigh-Schrodinger oracle on random 6-level systems.
  std::mt19937 rng(99);
  std::normal_distribution<double> dist;
  double worst_rs = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    RealVector e0(6);
    for (int k = 0; k < 6; ++k) e0(k) = 10.0 * k + dist(rng);
    Matrix v(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) v(i, j) = 0.05 * Complex(dist(rng), dist(rng));
    v = 0.5 * (v + v.adjoint()).eval();
    std::vector<int> subspace{0, 1, 2, 3, 4, 5};
    auto sw = schrieffer_wolff_order2(e0, v, subspace);
    for (int n = 0; n < 6; ++n) {
      double second = 0.0;
      for (int m = 0; m < 6; ++m) {
        if (m == n) continue;
        second += std::norm(v(n, m)) / (e0(n) - e0(m));
      }
      double rs = e0(n) + v(n, n).real() + second;
      worst_rs = std::max(worst_rs, std::abs(sw.effective_h(n, n).real() - rs));
    }
  }
  c.require(worst_rs < 1e-8, "SW vs Rayleigh-Schrodinger oracle, worst " + fmt(worst_rs));
  return c;
}

Check criterion_4() {
  Check c;
  double omega_r = two_pi * 6e9, omega_q = two_pi * 5e9;
  double worst = 0.0;
  for (double gfrac : {0.01, 0.02}) {
    double g = gfrac * omega_q;
    RabiSystem rwa{2, 14, omega_r, omega_q, 0.0, g, true};
    RabiSystem full{2, 14, omega_r, omega_q, 0.0, g, false};
    Eigen::MatrixXd tr = dressed_level_table(rabi_hamiltonian(rwa));
    Eigen::MatrixXd tf = dressed_level_table(rabi_hamiltonian(full));
    double shift = (tf(1, 0) - tf(0, 0)) - (tr(1, 0) - tr(0, 0));
    double bs = g * g / (omega_q + omega_r);
    worst = std::max(worst, std::abs(shift - bs) / bs);
  }
  c.require(worst < 0.05, "Bloch-Siegert g^2/(wq+wr), worst " + fmt(worst * 100) + "%");
  return c;
}

Check criterion_5() {
  Check c;
  auto started = std::chrono::steady_clock::now();

  // (a, b) bad cavity: EIT dip width 4 g^2 / kappa.
  TransmissionSpec bad;
  bad.g = two_pi * 1e6;
  bad.kappa = two_pi * 10e6;
  bad.gamma1 = 0.0;
  bad.epsilon = 0.01 * bad.kappa;
  auto fine = linspace(-two_pi * 3e6, two_pi * 3e6, 4001);
  Spectrum sb = transmission_sweep(bad, fine, TransmissionMethod::three_level_formula);
  double top = *std::max_element(sb.magnitude2.begin(), sb.magnitude2.end());
  double wlo = 0, whi = 0;
  for (size_t k = 1; k < fine.size(); ++k) {
    if (fine[k] < 0 && sb.magnitude2[k - 1] >= top / 2 && sb.magnitude2[k] < top / 2) wlo = fine[k];
    if (fine[k] > 0 && sb.magnitude2[k - 1] < top / 2 && sb.magnitude2[k] >= top / 2) whi = fine[k];
  }
  double width = whi - wlo;
  double dip_expected = 4.0 * bad.g * bad.g / bad.kappa;
  c.require(std::abs(width - dip_expected) / dip_expected < 0.10,
            "EIT dip width vs 4g^2/kappa: " + fmt(width / dip_expected));

  // (e, f) strong coupling doublet at +-g within kappa/10.
  TransmissionSpec strong;
  strong.g = two_pi * 100e6;
  strong.kappa = two_pi * 0.1e6;
  strong.gamma1 = two_pi * 0.1e6;
  strong.epsilon = 0.02 * strong.kappa;
  auto wide = linspace(-1.3 * strong.g, 1.3 * strong.g, 2401);
  Spectrum sd = transmission_sweep(strong, wide, TransmissionMethod::three_level_formula);
  auto doublet = spectrum_peaks(sd);
  bool doublet_ok = doublet.size() == 2 && std::abs(doublet[0] + strong.g) < strong.kappa / 10.0 &&
                    std::abs(doublet[1] - strong.g) < strong.kappa / 10.0;
  c.require(doublet_ok, "vacuum Rabi doublet at +-g within kappa/10");

  // (f) thermal variant: additional peaks strictly inside the doublet.
  TransmissionSpec hot = strong;
  hot.n_bar_kappa = 0.35;
  hot.resonator_dim = 8;
  auto grid = linspace(-1.2 * strong.g, 1.2 * strong.g, 361);
  Spectrum sh = transmission_sweep(hot, grid, TransmissionMethod::master_equation);
  auto peaks = spectrum_peaks(sh, 0.005);
  int inside = 0;
  bool all_inside = true;
  for (double p : peaks) {
    if (std::abs(std::abs(p) - strong.g) < 0.05 * strong.g) continue;  // main doublet
    ++inside;
    if (std::abs(p) >= strong.g) all_inside = false;
  }
  c.require(inside >= 2 && all_inside,
            "thermal peaks strictly inside the doublet (" + std::to_string(inside) + " found)");

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  c.require(wall < 120.0, "runtime " + fmt(wall) + " s < 120 s");
  return c;
}

Check criterion_6() {
  Check c;
  double kappa = two_pi * 1e6;
  double delta = 60.0 * kappa;
  double g = 0.1 * delta;
  HilbertSpace space({2, 3});
  auto [b, bd] = ladder_operators(2);
  auto [a, ad] = ladder_operators(3);
  Operator Sm = embed(b, 0, space), Sp = embed(bd, 0, space);
  Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
  Matrix h = delta * (Sp * Sm).matrix() + g * ((Ad * Sm).matrix() + (A * Sp).matrix());
  LindbladModel m{Operator(space, h, true), {{kappa, A}}, {}};
  double rate = dispersive_rates(g, delta, kappa, 0.0, 0.0).gamma_Purcell;
  auto grid = linspace(0.0, 2.0 / rate, 41);
  auto res = evolve(m, QuantumState::basis(space, {1, 0}), grid, {Sp * Sm});
  std::vector<double> pe;
  for (size_t k = 0; k < grid.size(); ++k)
    pe.push_back(res.expectations(static_cast<Eigen::Index>(k), 0).real());
  double fitted = fit_decay(grid, pe);
  c.require(std::abs(fitted - rate) / rate < 0.10,
            "fitted decay vs (g/Delta)^2 kappa: " + fmt(fitted / rate));

  double worst = 0.0;
  for (double dk : {50.0, 80.0, 200.0}) {
    auto r = dispersive_rates(g, dk * kappa, kappa, 0.0, 0.0);
    worst = std::max(worst, std::abs(r.gamma_Purcell_interp - r.gamma_Purcell) / r.gamma_Purcell);
  }
  c.require(worst < 0.01, "interpolated Purcell limit, worst " + fmt(worst * 100) + "%");
  return c;
}

Check criterion_7() {
  Check c;
  auto started = std::chrono::steady_clock::now();
  double kappa = two_pi * 1e6;
  double chi = 0.5 * kappa;

  // Long-time SNR shape over an (epsilon, tau) grid, up to one global scale.
  std::vector<double> sim, formula;
  double phi = std::atan(2.0 * chi / kappa);
  for (double efrac : {0.2, 0.3, 0.4, 0.5}) {
    double eps = efrac * kappa;
    auto traj = pointer_evolution([eps](double) { return Complex(eps, 0.0); }, 0.0, chi, kappa,
                                  linspace(0.0, 400.0 / kappa, 3001));
    for (double tau_k : {100.0, 150.0, 220.0, 300.0, 400.0}) {
      sim.push_back(snr(traj, 1.0, tau_k / kappa));
      formula.push_back((2.0 * eps / kappa) * std::sqrt(2.0 * tau_k) * std::abs(std::sin(2.0 * phi)));
    }
  }
  double corr = pearson(sim, formula);
  c.require(corr > 0.999, "long-time SNR shape correlation " + fmt(corr));

  // Optimum over 2 chi / kappa at tau kappa = 200.
  double eps = 0.4 * kappa;
  double best = 0.0, arg = 0.0;
  for (double ratio : linspace(0.3, 2.2, 39)) {
    auto traj = pointer_evolution([eps](double) { return Complex(eps, 0.0); }, 0.0,
                                  0.5 * ratio * kappa, kappa, linspace(0.0, 200.0 / kappa, 1501));
    double s = snr(traj, 1.0, 200.0 / kappa);
    if (s > best) {
      best = s;
      arg = ratio;
    }
  }
  c.require(std::abs(arg - 1.0) <= 0.1, "SNR optimum at 2chi/kappa = " + fmt(arg));

  // Histogram fidelity vs erfc at SNR in {1, 2, 4}, 1e5 shots.
  auto traj = pointer_evolution([eps](double) { return Complex(eps, 0.0); }, 0.0, chi, kappa,
                                linspace(0.0, 50.0 / kappa, 2001));
  double tau = 40.0 / kappa;
  double base = snr(traj, 1.0, tau);
  bool hist_ok = true;
  std::string hist_detail;
  for (double target : {1.0, 2.0, 4.0}) {
    double eta = std::min(1.0, (target / base) * (target / base));
    double s = snr(traj, eta, tau);
    auto rec = synthesize_heterodyne_records(traj, eta, tau, 100000, 2026);
    double fm_formula = measurement_fidelity(s);
    double fm_hist = histogram_fidelity(rec);
    double err = std::erfc(s / 2.0);
    double sigma = std::sqrt(2.0 * err * (1.0 - err) / 100000.0) + 2e-3;
    if (std::abs(fm_hist - fm_formula) > 3.0 * sigma) hist_ok = false;
    hist_detail += fmt(fm_hist - fm_formula) + " ";
  }
  c.require(hist_ok, "histogram Fm vs 1-erfc(SNR/2) within 3 sigma (diffs: " + hist_detail + ")");

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  c.require(wall < 60.0, "runtime " + fmt(wall) + " s < 60 s");
  return c;
}

Check criterion_8() {
  Check c;
  uint64_t state = 777;
  auto uniform = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return (state >> 11) * 0x1.0p-53;
  };
  double worst_gap = 0.0;
  bool eta_ok = true;
  for (int trial = 0; trial < 400; ++trial) {
    MeasurementChain chain;
    chain.stages.push_back({100.0 + 1e4 * uniform(), 2.0 * uniform(), 0.3 + 0.7 * uniform()});
    chain.stages.push_back({100.0 + 1e4 * uniform(), 20.0 * uniform(), 0.3 + 0.7 * uniform()});
    auto n = chain_noise(chain);
    worst_gap = std::max(worst_gap, std::abs(n.N_T - n.N_T_approx) / std::max(n.N_T, 1e-12));
    if (n.eta_bar > 0.5 + 1e-12) eta_ok = false;
  }
  c.require(worst_gap < 0.02, "exact vs large-gain N_T for G >= 100, worst " + fmt(worst_gap * 100) + "%");
  c.require(eta_ok, "eta_bar <= 1/2 over randomized chains");
  return c;
}

Check criterion_9() {
  Check c;

  // Weak dispersive: peak shift 2 chi nbar within 10% (line centroid).
  {
    AcStarkSpec spec;
    spec.chi = two_pi * 0.1e6;
    spec.kappa = two_pi * 0.1e6;
    spec.gamma1 = two_pi * 0.1e6;
    spec.OmegaR = two_pi * 0.1e6;
    spec.delta_r = 0.0;
    spec.epsilon = two_pi * 0.2e6;
    double nbar = spec.epsilon * spec.epsilon / (spec.chi * spec.chi + spec.kappa * spec.kappa / 4.0);
    spec.resonator_dim = static_cast<int>(nbar + 7.0 * std::sqrt(nbar) + 9.0);
    auto grid = linspace(-two_pi * 6e6, two_pi * 9e6, 151);
    auto pe = two_tone_ac_stark(spec, grid);
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < grid.size(); ++k) {
      num += grid[k] * pe[k];
      den += pe[k];
    }
    double centroid = num / den;
    double expected = 2.0 * spec.chi * nbar;
    c.require(std::abs(centroid - expected) / expected < 0.10,
              "ac-Stark centroid vs 2 chi nbar: " + fmt(centroid / expected));
  }

  // Strong dispersive: peak spacing 2 chi within 5%, Poissonian weights.
  {
    AcStarkSpec spec;
    spec.chi = two_pi * 5e6;
    spec.kappa = two_pi * 0.1e6;
    spec.gamma1 = two_pi * 0.1e6;
    spec.OmegaR = two_pi * 0.1e6;
    spec.epsilon = two_pi * 0.1e6;
    spec.delta_r = spec.chi;  // drive at omega_r - chi
    double nbar = std::pow(2.0 * spec.epsilon / spec.kappa, 2);  // 4 photons
    spec.resonator_dim = static_cast<int>(nbar + 7.0 * std::sqrt(nbar) + 9.0);
    auto grid = linspace(-two_pi * 4e6, two_pi * 86e6, 451);
    auto pe = two_tone_ac_stark(spec, grid);

    // Peak locations from local maxima.
    std::vector<double> peaks;
    double topv = *std::max_element(pe.begin(), pe.end());
    for (size_t k = 1; k + 1 < pe.size(); ++k)
      if (pe[k] > pe[k - 1] && pe[k] > pe[k + 1] && pe[k] > 0.02 * topv) {
        double denom = pe[k - 1] - 2.0 * pe[k] + pe[k + 1];
        double shift = (denom != 0.0) ? 0.5 * (pe[k - 1] - pe[k + 1]) / denom : 0.0;
        peaks.push_back(grid[k] + shift * (grid[k + 1] - grid[k]));
      }
    bool spacing_ok = peaks.size() >= 5;
    double mean_spacing = 0.0;
    if (spacing_ok) {
      for (size_t k = 1; k < peaks.size(); ++k) mean_spacing += (peaks[k] - peaks[k - 1]);
      mean_spacing /= (peaks.size() - 1);
      spacing_ok = std::abs(mean_spacing - 2.0 * spec.chi) / (2.0 * spec.chi) < 0.05;
    }
    c.require(spacing_ok, "number-splitting spacing vs 2 chi: " + fmt(mean_spacing / (2.0 * spec.chi)));

    // Peak areas vs Poisson(nbar): chi^2 with a 5% relative uncertainty per
    // category; p > 0.01.
    int npeaks = std::min<size_t>(peaks.size(), 7);
    std::vector<double> areas(static_cast<size_t>(npeaks), 0.0);
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
      double dw = grid[k + 1] - grid[k];
      for (int pk = 0; pk < npeaks; ++pk)
        if (std::abs(grid[k] - peaks[static_cast<size_t>(pk)]) < spec.chi)
          areas[static_cast<size_t>(pk)] += pe[k] * dw;
    }
    double total = 0.0, ptotal = 0.0;
    std::vector<double> poisson(static_cast<size_t>(npeaks));
    double logn = std::log(nbar);
    for (int k = 0; k < npeaks; ++k) {
      poisson[static_cast<size_t>(k)] = std::exp(k * logn - nbar - std::lgamma(k + 1.0));
      total += areas[static_cast<size_t>(k)];
      ptotal += poisson[static_cast<size_t>(k)];
    }
    double chi2 = 0.0;
    for (int k = 0; k < npeaks; ++k) {
      double obs = areas[static_cast<size_t>(k)] / total;
      double exp_w = poisson[static_cast<size_t>(k)] / ptotal;
      double sigma = 0.05 * exp_w + 1e-4;
      chi2 += (obs - exp_w) * (obs - exp_w) / (sigma * sigma);
    }
    double pval = gamma_q((npeaks - 1) / 2.0, chi2 / 2.0);
    c.require(pval > 0.01, "Poisson weights chi^2 p = " + fmt(pval));
  }

  // Measurement-induced dephasing vs the closed form within 10%.
  {
    double kappa = two_pi * 1e6;
    double chi = 0.5 * kappa;
    double eps = std::sqrt(chi * chi + kappa * kappa / 4.0);
    int nc = 8;
    HilbertSpace space({2, nc});
    auto [b, bd] = ladder_operators(2);
    auto [a, ad] = ladder_operators(nc);
    Operator Sp = embed(bd, 0, space), Sm = embed(b, 0, space);
    Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
    Matrix sz = 2.0 * (Sp * Sm).matrix() - Matrix::Identity(space.total_dim(), space.total_dim());
    Matrix h = chi * ((Ad * A).matrix() * sz) + eps * (Ad + A).matrix();
    LindbladModel m{Operator(space, h, true), {{kappa, A}}, {}};
    Vector plus = Vector::Zero(space.total_dim());
    plus(0) = 1.0 / std::sqrt(2.0);
    plus(nc) = 1.0 / std::sqrt(2.0);
    auto grid = linspace(0.0, 12.0 / kappa, 121);
    EvolveOptions opt;
    opt.store_states = true;
    auto res = evolve(m, QuantumState::ket(space, plus), grid, {}, opt);
    std::vector<double> ts, coh;
    for (size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] < 5.0 / kappa) continue;
      Matrix q = partial_trace(res.states[k], space, 0);
      ts.push_back(grid[k]);
      coh.push_back(std::abs(q(0, 1)));
    }
    double fitted = fit_decay(ts, coh);
    double ng = std::norm(-eps / Complex(-chi, -kappa / 2.0));
    double ne = std::norm(-eps / Complex(chi, -kappa / 2.0));
    double formula = kappa * chi * chi * (ng + ne) / (chi * chi + kappa * kappa / 4.0);
    c.require(std::abs(fitted - formula) / formula < 0.10,
              "gamma_m fit vs closed form: " + fmt(fitted / formula));
  }
  return c;
}

Check criterion_10() {
  Check c;
  PhaseSpaceGrid grid;
  grid.x_min = grid.p_min = -4.5;
  grid.x_max = grid.p_max = 4.5;

  Complex beta(1.0, -0.5);
  auto w = wigner(coherent_state(beta, 40), grid);
  double worst = 0.0;
  for (int i = 0; i < grid.resolution; i += 4)
    for (int j = 0; j < grid.resolution; j += 4) {
      Complex alpha(grid.x(i), grid.p(j));
      double expected = (2.0 / pi) * std::exp(-2.0 * std::norm(alpha - beta));
      worst = std::max(worst, std::abs(w.values(i, j) - expected));
    }
  c.require(worst < 1e-6, "coherent Wigner pointwise, worst " + fmt(worst));

  Vector one = Vector::Zero(25);
  one(1) = 1.0;
  QuantumState fock1 = QuantumState::ket(HilbertSpace({25}), one);
  auto w1 = wigner(fock1, grid);
  auto q1 = husimi_q(fock1, grid);
  auto conv = convolve_with_vacuum(w1);
  c.require((conv.values - q1.values).cwiseAbs().maxCoeff() < 1e-3,
            "Q = W * W_vac on the grid");

  SqueezeParams sq{1.0, 0.7};
  Operator s = squeeze_operator(sq, 100);
  Vector vac = Vector::Zero(100);
  vac(0) = 1.0;
  Vector state = s.matrix() * vac;
  auto [a, ad] = ladder_operators(100);
  double worst_var = 0.0;
  for (double phi : {0.0, 0.35, pi / 2.0, 1.9}) {
    // X_phi = (a e^{-i phi} + a' e^{+i phi})/sqrt(2), vacuum variance 1/2.
    Matrix quad = (a.matrix() * std::exp(Complex(0.0, -phi)) +
                   ad.matrix() * std::exp(Complex(0.0, phi))) /
                  std::sqrt(2.0);
    double var = (state.adjoint() * (quad * quad) * state)(0, 0).real();
    worst_var = std::max(worst_var, std::abs(var - squeezed_vacuum_variance(sq, phi)));
  }
  c.require(worst_var < 1e-8, "squeezed variance vs formula, worst " + fmt(worst_var));

  double worst_odd = 0.0;
  for (int n = 1; n < 100; n += 2) worst_odd = std::max(worst_odd, std::norm(state(n)));
  c.require(worst_odd < 1e-10, "odd Fock populations, worst " + fmt(worst_odd));
  return c;
}

Check criterion_11() {
  Check c;
  auto started = std::chrono::steady_clock::now();

  double J = two_pi * 10e6;
  GateResult half = iswap_gate(J, pi / (4.0 * J));
  c.require(average_gate_fidelity(half.unitary, sqrt_iswap_target()) > 1.0 - 1e-6,
            "sqrt(iSWAP) fidelity at t = pi/4J");

  CzProtocol sudden;
  sudden.sudden = true;
  GateResult cz = cz_11_02(two_pi * 8e6, sudden);
  c.require(cz.fidelity > 0.999, "sudden 11-02 CPHASE(pi) fidelity " + fmt(cz.fidelity));
  c.require(std::abs(cz.unitary(3, 3) + 1.0) < 1e-3, "conditional -1 on |11>");

  // Cross-resonance ZX rate vs conditional three-level tomography; the
  // anharmonicity sits away from the Delta12 - EC1 pole so the quoted
  // first-order coefficients apply at this drive.
  {
    double d12 = two_pi * 300e6;
    double j = 0.02 * d12;
    double e_drive = 0.05 * d12;
    double ec1 = 0.1e9, ec2 = 0.1e9;
    double ec1_ang = two_pi * ec1, ec2_ang = two_pi * ec2;
    int dim = 3;
    auto zx_pred = cross_resonance_effective(j, d12, ec1, ec2, e_drive);

    HilbertSpace space({dim, dim});
    auto [b, bd] = ladder_operators(dim);
    auto duffing = [&](double dq, double ec, int idx) {
      Matrix h = Matrix::Zero(dim, dim);
      for (int n = 0; n < dim; ++n) h(n, n) = dq * n - 0.5 * ec * n * (n - 1);
      return embed(Operator(HilbertSpace({dim}), h, true), idx, space).matrix();
    };
    Matrix hj = j * ((embed(bd, 0, space) * embed(b, 1, space)).matrix() +
                     (embed(b, 0, space) * embed(bd, 1, space)).matrix());
    Matrix hstatic = duffing(d12, ec1_ang, 0) + duffing(0.0, ec2_ang, 1) + hj;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hstatic);
    auto energy_of = [&](int b1, int b2) {
      int bare = b1 * dim + b2;
      double best = 0.0, energy = 0.0;
      for (int k = 0; k < dim * dim; ++k)
        if (std::norm(es.eigenvectors()(bare, k)) > best) {
          best = std::norm(es.eigenvectors()(bare, k));
          energy = es.eigenvalues()(k);
        }
      return energy;
    };
    Matrix drive_op = embed(bd, 0, space).matrix();
    Matrix n2 = (embed(bd, 1, space) * embed(b, 1, space)).matrix();
    auto rabi_rate = [&](int q1_state) {
      double sz = (q1_state == 1) ? 1.0 : -1.0;
      double window = 1.3 * pi / (2.0 * std::abs(zx_pred.x2 + zx_pred.zx * sz));
      double f_cond = energy_of(q1_state, 1) - energy_of(q1_state, 0);
      Matrix h = duffing(d12 - f_cond, ec1_ang, 0) + duffing(-f_cond, ec2_ang, 1) + hj;
      auto coef = [e_drive](double) { return Complex(e_drive, 0.0); };
      Vector psi = Vector::Zero(dim * dim);
      psi(q1_state * dim) = 1.0;
      int points = 400;
      double best_p = -1.0, peak_t = window;
      Matrix u = Matrix::Identity(dim * dim, dim * dim);
      int steps_per = static_cast<int>(window / points * (d12 + ec1_ang) * 8.0) + 20;
      for (int k = 1; k <= points; ++k) {
        u = propagate_schrodinger(h, {{drive_op, coef}}, window * (k - 1) / points,
                                  window * k / points, steps_per) *
            u;
        Vector cur = u * psi;
        double p = (cur.adjoint() * n2 * cur)(0, 0).real();
        if (p > best_p) {
          best_p = p;
          peak_t = window * k / points;
        }
      }
      return pi / peak_t;
    };
    double zx_meas = std::abs(rabi_rate(1) - rabi_rate(0)) / 4.0;
    c.require(std::abs(zx_meas - std::abs(zx_pred.zx)) / std::abs(zx_pred.zx) < 0.10,
              "CR ZX tomography vs effective model: " + fmt(zx_meas / std::abs(zx_pred.zx)));
  }

  // Parametric sideband peak near 1.84.
  {
    double best = 0.0, arg = 0.0;
    for (double z : linspace(1.0, 2.6, 321)) {
      auto s = parametric_sideband(two_pi * 2e6, z * two_pi * 100e6, two_pi * 100e6, two_pi * 100e6);
      if (std::abs(s.effective_coupling) > best) {
        best = std::abs(s.effective_coupling);
        arg = z;
      }
    }
    c.require(std::abs(arg - 1.84) < 0.05, "J1 peak at eps/omega = " + fmt(arg));

    // Full modulated simulation at z = 1.84 within 10%.
    double delta12 = two_pi * 100e6, Jc = two_pi * 2e6, z = 1.84;
    double j_eff = Jc * std::cyl_bessel_j(1, z);
    HilbertSpace space({2, 2});
    auto [b, bd] = ladder_operators(2);
    Matrix n1 = (embed(bd, 0, space) * embed(b, 0, space)).matrix();
    Matrix n2 = (embed(bd, 1, space) * embed(b, 1, space)).matrix();
    Matrix h0 = delta12 * n1 + Jc * ((embed(bd, 0, space) * embed(b, 1, space)).matrix() +
                                     (embed(b, 0, space) * embed(bd, 1, space)).matrix());
    auto coef = [&](double t) { return Complex(0.5 * z * delta12 * std::sin(delta12 * t), 0.0); };
    Vector psi = Vector::Zero(4);
    psi(2) = 1.0;
    double t_total = 1.3 * pi / (2.0 * j_eff);
    int points = 400;
    double best_p = -1.0, peak_t = t_total;
    Matrix u = Matrix::Identity(4, 4);
    int steps_per = static_cast<int>(t_total / points * z * delta12 * 6.0) + 20;
    for (int k = 1; k <= points; ++k) {
      u = propagate_schrodinger(h0, {{n1, coef}}, t_total * (k - 1) / points, t_total * k / points,
                                steps_per) *
          u;
      Vector cur = u * psi;
      double p = (cur.adjoint() * n2 * cur)(0, 0).real();
      if (p > best_p) {
        best_p = p;
        peak_t = t_total * k / points;
      }
    }
    double j_meas = pi / (2.0 * peak_t);
    c.require(std::abs(j_meas - std::abs(j_eff)) / std::abs(j_eff) < 0.10,
              "modulated exchange rate vs J J1: " + fmt(j_meas / std::abs(j_eff)));
  }

  // DRAG beats plain Gaussian at all tested short gate times.
  {
    double ec = 0.3e9;
    double ec_ang = two_pi * ec;
    bool ordered = true;
    for (double duration : {6e-9, 8e-9, 12e-9}) {
      auto make = [&](bool drag) {
        DriveEnvelope e;
        e.shape = drag ? PulseShape::gaussian_drag : PulseShape::gaussian;
        e.duration = duration;
        e.sigma = duration / 4.0;
        e.drag_coefficient = 1.0;
        e.amplitude = 1.0;
        e.amplitude = 0.5 * pi / e.pulse_area(ec_ang);
        return e;
      };
      Matrix target(2, 2);
      target << 0.0, Complex(0.0, -1.0), Complex(0.0, -1.0), 0.0;
      double lg = single_qubit_gate(make(false), 3, ec, target).leakage;
      double ld = single_qubit_gate(make(true), 3, ec, target).leakage;
      if (!(ld < lg)) ordered = false;
    }
    c.require(ordered, "DRAG leakage below Gaussian at 6/8/12 ns");
  }

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  c.require(wall < 300.0, "runtime " + fmt(wall) + " s < 300 s");
  return c;
}

Check criterion_12() {
  Check c;
  // Fig. 9 caption parameters.
  double omega_r = two_pi * 7.0e9;
  double g1 = two_pi * 199e6, g2 = two_pi * 190e6;
  TransmonParams p1{28.48e9, 317e6, 0, 0, 0, 0};
  TransmonParams p2{42.34e9, 297e6, 0, 0, 0, 0};
  int nq = 5, nr = 5, ncut = 25;

  auto levels_of = [&](const TransmonParams& p) {
    Operator h = transmon_charge_hamiltonian(p, ncut);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    std::pair<std::vector<double>, Eigen::MatrixXd> out;
    for (int j = 0; j < nq; ++j) out.first.push_back(es.eigenvalues()(j) - es.eigenvalues()(0));
    out.second.resize(nq, nq);
    for (int j = 0; j < nq; ++j)
      for (int k = 0; k < nq; ++k) {
        Complex acc = 0.0;
        for (int cc = 0; cc < 2 * ncut + 1; ++cc)
          acc += std::conj(es.eigenvectors()(cc, j)) * static_cast<double>(cc - ncut) *
                 es.eigenvectors()(cc, k);
        out.second(j, k) = acc.real();
      }
    return out;
  };
  auto q2 = levels_of(p2);

  HilbertSpace space({nq, nq, nr});
  auto [ar, adr] = ladder_operators(nr);
  Matrix a_full = embed(ar, 2, space).matrix();
  Matrix ad_full = embed(adr, 2, space).matrix();

  // Exchange-coupled multilevel transmons: ladder weights from the charge
  // matrix elements, excitation-conserving coupling.
  auto hamiltonian_at = [&](double scale) {
    TransmonParams p = p1;
    p.EJ *= scale;
    auto q1 = levels_of(p);
    Matrix h = Matrix::Zero(space.total_dim(), space.total_dim());
    auto add_atom = [&](const std::pair<std::vector<double>, Eigen::MatrixXd>& q, int idx, double g) {
      Matrix hq = Matrix::Zero(nq, nq);
      for (int j = 0; j < nq; ++j) hq(j, j) = q.first[static_cast<size_t>(j)];
      h += embed(Operator(HilbertSpace({nq}), hq, true), idx, space).matrix();
      Matrix bq = Matrix::Zero(nq, nq);
      for (int j = 0; j + 1 < nq; ++j) bq(j, j + 1) = g * q.second(j, j + 1) / q.second(0, 1);
      Matrix b_full = embed(Operator(HilbertSpace({nq}), bq), idx, space).matrix();
      h += ad_full * b_full + b_full.adjoint() * a_full;
    };
    add_atom(q1, 0, g1);
    add_atom(q2, 1, g2);
    h += omega_r * (ad_full * a_full);
    return std::make_pair(h, q1.first[1]);
  };

  // Gap between the two qubit-like one-excitation levels vs sweep.
  auto labelled_energies = [&](double scale) {
    auto [h, fq1] = hamiltonian_at(scale);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    struct Out {
      double e100, e010, e110, e020, fq1;
    } out{};
    out.fq1 = fq1;
    auto energy_of = [&](int b1, int b2, int br) {
      int bare = (b1 * nq + b2) * nr + br;
      double best = 0.0, e = 0.0;
      for (int k = 0; k < space.total_dim(); ++k)
        if (std::norm(es.eigenvectors()(bare, k)) > best) {
          best = std::norm(es.eigenvectors()(bare, k));
          e = es.eigenvalues()(k);
        }
      return e - es.eigenvalues()(0);
    };
    out.e100 = energy_of(1, 0, 0);
    out.e010 = energy_of(0, 1, 0);
    out.e110 = energy_of(1, 1, 0);
    out.e020 = energy_of(0, 2, 0);
    return out;
  };

  // One-excitation qubit-qubit anticrossing: minimize the gap over the sweep.
  auto gap_1exc = [&](double scale) {
    auto e = labelled_energies(scale);
    return std::abs(e.e100 - e.e010);
  };
  double lo = 1.0, hi = 2.4;
  double best_scale = lo, best_gap = 1e300;
  for (double s : linspace(lo, hi, 57)) {
    double gp = gap_1exc(s);
    if (gp < best_gap) {
      best_gap = gp;
      best_scale = s;
    }
  }
  for (int iter = 0; iter < 24; ++iter) {  // ternary refinement
    double a = best_scale - 0.03, b = best_scale + 0.03;
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (gap_1exc(m1) < gap_1exc(m2))
      best_scale = (a + m1) / 2.0;
    else
      best_scale = (m2 + b) / 2.0;
    best_gap = std::min(best_gap, gap_1exc(best_scale));
  }
  auto at_crossing = labelled_energies(best_scale);
  double delta1 = at_crossing.fq1 - omega_r;
  double delta2 = at_crossing.e010 - omega_r;  // dressed is fine to this order
  double j_pred = mediated_J(g1, g2, delta1, delta2);
  c.require(std::abs(best_gap - 2.0 * j_pred) / (2.0 * j_pred) < 0.10,
            "1-exc anticrossing vs 2J: " + fmt(best_gap / (2.0 * j_pred)));

  // 11-02 anticrossing resolved in the two-excitation manifold.
  auto gap_1102 = [&](double scale) {
    auto e = labelled_energies(scale);
    return std::abs(e.e110 - e.e020);
  };
  double best_zeta = 1e300;
  for (double s : linspace(0.6, 1.6, 81)) best_zeta = std::min(best_zeta, gap_1102(s));
  c.require(best_zeta > two_pi * 1e6 && best_zeta < two_pi * 500e6,
            "11-02 anticrossing resolved, zeta/2pi = " + fmt(best_zeta / two_pi) + " Hz");
  return c;
}

Check criterion_13() {
  Check c;
  auto started = std::chrono::steady_clock::now();

  CodeSpec binomial = binomial_code(10);
  auto kl = knill_laflamme_check(binomial, binomial.error_set);
  c.require(kl.satisfied_exactly, "binomial KL with {I, a} residual " + fmt(kl.residual()));

  CodeSpec fourq = four_qubit_code();
  // First-order correctability: KL on the no-loss and single-loss Kraus.
  auto channel4 = [](double gt) {
    auto all = four_qubit_damping(gt).kraus;
    std::vector<Matrix> first_order{all[0]};
    for (int q = 0; q < 4; ++q) first_order.push_back(all[static_cast<size_t>(1 << q)]);
    return first_order;
  };
  std::vector<double> ktgrid;
  for (int k = 0; k < 7; ++k) ktgrid.push_back(1e-4 * std::pow(100.0, k / 6.0));
  auto scaling = kl_scaling(fourq, channel4, ktgrid);
  c.require(scaling.verdict == KlOrder::first_order,
            "4-qubit KL first order in gamma t (exponent " + fmt(scaling.exponent) + ")");

  std::vector<double> grid;
  for (int k = 0; k < 9; ++k) grid.push_back(1e-3 * std::pow(30.0, k / 8.0));
  auto channel = [](double kt) { return amplitude_damping_kraus(kt, 10).kraus; };
  auto bench = recovery_benchmark(binomial, channel, grid);
  c.require(std::abs(bench.exponent_recovered - 2.0) < 0.15,
            "binomial recovered exponent " + fmt(bench.exponent_recovered));

  CodeSpec trivial;
  trivial.name = "fock";
  trivial.space = HilbertSpace({6});
  Vector w0 = Vector::Zero(6), w1 = Vector::Zero(6);
  w0(0) = 1.0;
  w1(1) = 1.0;
  trivial.codewords = {w0, w1};
  auto channel6 = [](double kt) { return amplitude_damping_kraus(kt, 6).kraus; };
  auto bench0 = recovery_benchmark(trivial, channel6, grid);
  c.require(std::abs(bench0.exponent_bare - 1.0) < 0.15,
            "unencoded exponent " + fmt(bench0.exponent_bare));

  CodeSpec cat = cat_code(2.0, 2, 30);
  Vector zero = (cat.codewords[0] + cat.codewords[1]) / std::sqrt(2.0);
  Vector one = (cat.codewords[0] - cat.codewords[1]) / std::sqrt(2.0);
  auto [a, ad] = ladder_operators(30);
  double elem = std::abs((Complex)(one.adjoint() * (a.matrix() * zero))(0, 0));
  double expected = 2.0 * std::exp(-8.0);
  c.require(std::abs(elem - expected) < 1e-10,
            "cat bit-flip element vs alpha e^{-2 alpha^2}, diff " + fmt(std::abs(elem - expected)));

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  c.require(wall < 120.0, "runtime " + fmt(wall) + " s < 120 s");
  return c;
}

Check criterion_14() {
  Check c;
  namespace fs = std::filesystem;
  nlohmann::json cfg = {{"scenario", "custom"}, {"chi_hz", 0.5e6}, {"kappa_hz", 1e6},
                        {"epsilon_hz", 0.4e6}, {"eta", 0.8},      {"points", 161},
                        {"shots", 400},        {"t_max_s", 1e-5}};
  fs::path d1 = fs::temp_directory_path() / "cqed_accept_det1";
  fs::path d2 = fs::temp_directory_path() / "cqed_accept_det2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  auto r1 = run_scenario("readout", cfg, d1.string(), 123, 1);
  auto r2 = run_scenario("readout", cfg, d2.string(), 123, 1);
  c.require(r1.exit_code == 0 && r2.exit_code == 0, "scenario runs succeed");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  bool identical = true;
  for (const char* f : {"pointer.csv", "records_g.csv", "records_e.csv", "readout_summary.json"})
    if (slurp(d1 / f) != slurp(d2 / f)) identical = false;
  c.require(identical, "bit-identical CSV outputs for identical config + seed");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  std::vector<std::pair<int, std::function<Check()>>> criteria = {
      {1, criterion_1},  {2, criterion_2},  {3, criterion_3},  {4, criterion_4},
      {5, criterion_5},  {6, criterion_6},  {7, criterion_7},  {8, criterion_8},
      {9, criterion_9},  {10, criterion_10}, {11, criterion_11}, {12, criterion_12},
      {13, criterion_13}, {14, criterion_14}};

  int failures = 0;
  for (const auto& [num, fn] : criteria) {
    if (only != 0 && num != only) continue;
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail += std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d: %s  (%s)\n", num, result.ok ? "PASS" : "FAIL",
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
