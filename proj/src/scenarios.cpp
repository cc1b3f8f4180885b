#include "cqed/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "cqed/codes.hpp"
#include "cqed/coupling.hpp"
#include "cqed/devices.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/gates.hpp"
#include "cqed/phasespace.hpp"
#include "cqed/readout.hpp"

namespace cqed {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter {
  explicit CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out(path) {
    if (!out) throw Error(ErrorKind::config, "cli", "cannot open output file " + path.string());
    for (size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << "\n";
  }
  void row(const std::vector<double>& values) {
    for (size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << fmt(values[k]);
    out << "\n";
  }
  std::ofstream out;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  int workers = std::min(threads, n);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        int k = next.fetch_add(1);
        if (k >= n) return;
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double require_number(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg[key].is_number())
    throw Error(ErrorKind::config, "cli", "missing or non-numeric config key '" + key + "'");
  return cfg[key].get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
  return (cfg.contains(key) && cfg[key].is_number()) ? cfg[key].get<double>() : fallback;
}

int int_or(const json& cfg, const std::string& key, int fallback) {
  return (cfg.contains(key) && cfg[key].is_number()) ? cfg[key].get<int>() : fallback;
}

std::string string_or(const json& cfg, const std::string& key, const std::string& fallback) {
  return (cfg.contains(key) && cfg[key].is_string()) ? cfg[key].get<std::string>() : fallback;
}

struct RunContext {
  fs::path out_dir;
  uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
  void warn(const std::string& msg) { warnings.push_back(msg); }
  void note_leakage(const std::vector<LeakageWarning>& ws, const std::string& where) {
    for (const auto& w : ws)
      warn(where + ": truncation leakage " + fmt(w.max_population) + " on subsystem " +
           std::to_string(w.subsystem) + " from t=" + fmt(w.time));
  }
};

// ---------------------------------------------------------------------------
// Multilevel builders shared by fig9 / fig13.

struct TransmonLevels {
  std::vector<double> omega;  // rad/s relative to the ground state
  Eigen::MatrixXd n_elem;     // charge matrix elements in the eigenbasis
};

TransmonLevels transmon_levels(const TransmonParams& p, int ncut, int count) {
  Operator h = transmon_charge_hamiltonian(p, ncut);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const int dim = h.dim();
  TransmonLevels out;
  out.omega.reserve(static_cast<size_t>(count));
  out.n_elem.resize(count, count);
  for (int j = 0; j < count; ++j) out.omega.push_back(es.eigenvalues()(j) - es.eigenvalues()(0));
  for (int j = 0; j < count; ++j)
    for (int k = 0; k < count; ++k) {
      Complex acc = 0.0;
      for (int c = 0; c < dim; ++c)
        acc += std::conj(es.eigenvectors()(c, j)) * static_cast<double>(c - ncut) *
               es.eigenvectors()(c, k);
      out.n_elem(j, k) = acc.real();  // eigenvectors are real up to phase
    }
  out.n_elem = 0.5 * (out.n_elem + out.n_elem.transpose()).eval();
  return out;
}

// Two charge-basis transmons exchange-coupled to one mode: the multilevel
// lowering ladders carry the charge matrix elements, normalized so the 0-1
// coupling equals g_i, and only excitation-conserving terms are kept.
Operator two_transmon_resonator(const TransmonLevels& q1, const TransmonLevels& q2, double omega_r,
                                double g1, double g2, int nq, int nr) {
  HilbertSpace space({nq, nq, nr});
  auto [a, ad] = ladder_operators(nr);
  Operator A = embed(a, 2, space), Ad = embed(ad, 2, space);

  auto atom_h = [&](const TransmonLevels& q, int index) {
    Matrix h = Matrix::Zero(nq, nq);
    for (int j = 0; j < nq; ++j) h(j, j) = q.omega[static_cast<size_t>(j)];
    return embed(Operator(HilbertSpace({nq}), h, true), index, space);
  };
  auto lowering = [&](const TransmonLevels& q, int index, double g) {
    Matrix b = Matrix::Zero(nq, nq);
    for (int j = 0; j + 1 < nq; ++j) b(j, j + 1) = g * q.n_elem(j, j + 1) / q.n_elem(0, 1);
    return embed(Operator(HilbertSpace({nq}), b), index, space);
  };

  Matrix h = atom_h(q1, 0).matrix() + atom_h(q2, 1).matrix() + omega_r * (Ad * A).matrix();
  for (int i = 0; i < 2; ++i) {
    Operator b = (i == 0) ? lowering(q1, 0, g1) : lowering(q2, 1, g2);
    h += (Ad * b).matrix() + (b.dagger() * A).matrix();
  }
  return Operator(space, std::move(h), true);
}

// Dressed eigenvalues labeled by maximum overlap with the bare basis.
std::vector<int> assign_bare_labels(const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  const int n = static_cast<int>(es.eigenvalues().size());
  struct Claim {
    double overlap;
    int eig, bare;
  };
  std::vector<Claim> claims;
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b) claims.push_back({std::norm(es.eigenvectors()(b, e)), e, b});
  std::sort(claims.begin(), claims.end(), [](const Claim& x, const Claim& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    return x.eig < y.eig;
  });
  std::vector<int> bare_of_eig(static_cast<size_t>(n), -1);
  std::vector<bool> taken(static_cast<size_t>(n), false);
  int done = 0;
  for (const auto& c : claims) {
    if (done == n) break;
    if (bare_of_eig[static_cast<size_t>(c.eig)] != -1 || taken[static_cast<size_t>(c.bare)]) continue;
    bare_of_eig[static_cast<size_t>(c.eig)] = c.bare;
    taken[static_cast<size_t>(c.bare)] = true;
    ++done;
  }
  return bare_of_eig;
}

// ---------------------------------------------------------------------------
// spectrum handlers

void run_fig5(const json& cfg, RunContext& ctx) {
  double plasma = number_or(cfg, "plasma_frequency_hz", 5e9);
  std::vector<double> ratios;
  if (cfg.contains("ej_ec_ratios"))
    for (const auto& r : cfg["ej_ec_ratios"]) ratios.push_back(r.get<double>());
  else
    ratios = {1.0, 5.0, 10.0, 50.0};
  int points = int_or(cfg, "ng_points", 101);
  int ncut = int_or(cfg, "ncut", 30);

  CsvWriter csv(ctx.file("fig5_charge_dispersion.csv"),
                {"ej_ec_ratio", "ng", "f01_hz", "f02_hz", "f03_hz"});
  for (double ratio : ratios) {
    double ec = plasma / std::sqrt(8.0 * ratio);
    TransmonParams p{ratio * ec, ec, 0.0, 0.0, 0.0, 0.0};
    for (double ng : linspace(0.0, 1.0, points)) {
      p.ng = ng;
      auto levels = transmon_charge_levels(p, ncut, 4);
      csv.row({ratio, ng, levels[1] / two_pi, levels[2] / two_pi, levels[3] / two_pi});
    }
  }
}

void run_fig8(const json& cfg, RunContext& ctx) {
  struct Regime {
    const char* name;
    double kappa, gamma1, g;  // 2pi MHz
  };
  const Regime regimes[] = {{"bad_cavity", 10.0, 0.0, 1.0},
                            {"bad_qubit", 0.0, 10.0, 1.0},
                            {"strong", 0.1, 0.1, 100.0}};
  int points = int_or(cfg, "points", 401);
  double nbar_thermal = number_or(cfg, "n_bar_kappa", 0.35);

  for (const auto& r : regimes) {
    TransmissionSpec spec;
    spec.omega_r = 0.0;  // rotating frame; frequencies reported as detunings
    spec.omega_q = 0.0;
    spec.g = two_pi * r.g * 1e6;
    spec.kappa = two_pi * r.kappa * 1e6;
    spec.gamma1 = two_pi * r.gamma1 * 1e6;
    bool strong = std::string(r.name) == "strong";
    double span = strong ? 1.5 * spec.g : 2.5 * two_pi * 10e6;
    auto grid = linspace(-span, span, strong ? 5 * points : points);
    // Size the probe from the linear response so the steady photon number
    // stays well below one in every regime.
    spec.epsilon = 1.0;
    double peak = 0.0;
    for (double wd : grid) peak = std::max(peak, std::abs(transmission_amplitude(spec, wd)));
    spec.epsilon = 0.3 / peak;
    spec.resonator_dim = 4;
    Spectrum formula = transmission_sweep(spec, grid, TransmissionMethod::three_level_formula);
    Spectrum me = transmission_sweep(spec, grid, TransmissionMethod::master_equation);

    if (std::string(r.name) == "strong") {
      TransmissionSpec hot = spec;
      hot.n_bar_kappa = nbar_thermal;
      hot.resonator_dim = int_or(cfg, "thermal_resonator_dim", 7);
      Spectrum me_hot = transmission_sweep(hot, grid, TransmissionMethod::master_equation);
      CsvWriter csv(ctx.file(std::string("fig8_") + r.name + ".csv"),
                    {"detuning_hz", "a2_formula", "phase", "a2_master", "a2_master_thermal"});
      for (size_t k = 0; k < grid.size(); ++k)
        csv.row({grid[k] / two_pi, formula.magnitude2[k], formula.phase[k], me.magnitude2[k],
                 me_hot.magnitude2[k]});
    } else {
      CsvWriter csv(ctx.file(std::string("fig8_") + r.name + ".csv"),
                    {"detuning_hz", "a2_formula", "phase", "a2_master"});
      for (size_t k = 0; k < grid.size(); ++k)
        csv.row({grid[k] / two_pi, formula.magnitude2[k], formula.phase[k], me.magnitude2[k]});
    }
  }

  // Time-domain panels: decay of |e,0> (bad cavity) and vacuum Rabi (strong).
  auto time_panel = [&](const char* name, double kappa, double gamma1, double g,
                        const std::vector<int>& initial) {
    HilbertSpace space({2, 3});
    auto [b, bd] = ladder_operators(2);
    auto [a, ad] = ladder_operators(3);
    Operator Sm = embed(b, 0, space), Sp = embed(bd, 0, space);
    Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
    Matrix h = g * ((Ad * Sm).matrix() + (A * Sp).matrix());
    LindbladModel m{Operator(space, h, true), {}, {}};
    if (kappa > 0.0) m.collapse.push_back({kappa, A});
    if (gamma1 > 0.0) m.collapse.push_back({gamma1, Sm});
    double t_max = 6.0 / std::max({kappa, gamma1, 1.0});
    if (g > 10.0 * std::max(kappa, gamma1)) t_max = 40.0 / std::max(kappa, gamma1);
    auto grid = linspace(0.0, t_max, 801);
    auto res = evolve(m, QuantumState::basis(space, initial), grid, {Sp * Sm, Ad * A});
    ctx.note_leakage(res.leakage_warnings, name);
    CsvWriter csv(ctx.file(std::string("fig8_") + name + "_time.csv"), {"t_s", "p_e", "n_photon"});
    for (size_t k = 0; k < grid.size(); ++k)
      csv.row({grid[k], res.expectations(static_cast<Eigen::Index>(k), 0).real(),
               res.expectations(static_cast<Eigen::Index>(k), 1).real()});
  };
  time_panel("bad_cavity", two_pi * 10e6, 0.0, two_pi * 1e6, {1, 0});
  time_panel("bad_qubit", 0.0, two_pi * 10e6, two_pi * 1e6, {0, 1});
  time_panel("strong", two_pi * 0.1e6, two_pi * 0.1e6, two_pi * 100e6, {1, 0});
}

void run_fig9(const json& cfg, RunContext& ctx) {
  double omega_r = two_pi * number_or(cfg, "omega_r_hz", 7.0e9);
  double g1 = two_pi * number_or(cfg, "g1_hz", 199e6);
  double g2 = two_pi * number_or(cfg, "g2_hz", 190e6);
  TransmonParams p1{number_or(cfg, "ej1_hz", 28.48e9), number_or(cfg, "ec1_hz", 317e6), 0, 0, 0, 0};
  TransmonParams p2{number_or(cfg, "ej2_hz", 42.34e9), number_or(cfg, "ec2_hz", 297e6), 0, 0, 0, 0};
  int nq = int_or(cfg, "transmon_levels", 5);
  int nr = int_or(cfg, "resonator_levels", 5);
  int ncut = int_or(cfg, "ncut", 25);
  int points = int_or(cfg, "sweep_points", 121);
  double scale_lo = number_or(cfg, "ej1_scale_min", 1.0);
  double scale_hi = number_or(cfg, "ej1_scale_max", 2.4);

  TransmonLevels q2 = transmon_levels(p2, ncut, nq);
  const int dim = nq * nq * nr;
  const int n_report = 12;

  std::vector<std::vector<double>> rows(static_cast<size_t>(points));
  auto sweep = linspace(scale_lo, scale_hi, points);
  parallel_for(points, ctx.threads, [&](int k) {
    TransmonParams p1k = p1;
    p1k.EJ = p1.EJ * sweep[static_cast<size_t>(k)];
    TransmonLevels q1 = transmon_levels(p1k, ncut, nq);
    Operator h = two_transmon_resonator(q1, q2, omega_r, g1, g2, nq, nr);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    auto labels = assign_bare_labels(es);

    std::vector<double> row;
    row.push_back(q1.omega[1] / two_pi);  // qubit-1 frequency, Hz
    // Report energies of selected bare labels (relative to the ground state).
    auto energy_of_bare = [&](int iq1, int iq2, int ir) {
      int bare = (iq1 * nq + iq2) * nr + ir;
      for (int e = 0; e < dim; ++e)
        if (labels[static_cast<size_t>(e)] == bare) return es.eigenvalues()(e) - es.eigenvalues()(0);
      return 0.0;
    };
    row.push_back(energy_of_bare(1, 0, 0) / two_pi);
    row.push_back(energy_of_bare(0, 1, 0) / two_pi);
    row.push_back(energy_of_bare(0, 0, 1) / two_pi);
    row.push_back(energy_of_bare(1, 1, 0) / two_pi);
    row.push_back(energy_of_bare(0, 2, 0) / two_pi);
    row.push_back(energy_of_bare(2, 0, 0) / two_pi);
    for (int e = 1; e <= n_report && e < dim; ++e)
      row.push_back((es.eigenvalues()(e) - es.eigenvalues()(0)) / two_pi);
    rows[static_cast<size_t>(k)] = std::move(row);
  });

  std::vector<std::string> header = {"f_q1_hz",  "e_10_0_hz", "e_01_0_hz", "e_00_1_hz",
                                     "e_11_0_hz", "e_02_0_hz", "e_20_0_hz"};
  for (int e = 1; e <= n_report; ++e) header.push_back("level_" + std::to_string(e) + "_hz");
  CsvWriter csv(ctx.file("fig9_spectrum.csv"), header);
  for (const auto& row : rows) csv.row(row);
}

void run_fig13(const json& cfg, RunContext& ctx) {
  double f01 = number_or(cfg, "f01_hz", 6.0e9);
  double f12 = number_or(cfg, "f12_hz", 5.75e9);
  double g = two_pi * number_or(cfg, "g_hz", 0.1e9);
  double omega_r = two_pi * number_or(cfg, "omega_r_hz", 5.0e9);
  int n_max = int_or(cfg, "n_max", 25);
  int nr = n_max + 12;

  CsvWriter csv(ctx.file("fig13_cavity_pull.csv"),
                {"levels", "n", "f_r_g_hz", "f_r_e_hz", "f_r_f_hz"});
  for (int nlev : {2, 3, 6}) {
    // Duffing ladder pinned to the quoted 01 and 12 transitions.
    double ec = two_pi * (f01 - f12);
    double wq = two_pi * f01;
    std::vector<double> atom(static_cast<size_t>(nlev));
    for (int j = 0; j < nlev; ++j) atom[static_cast<size_t>(j)] = wq * j - 0.5 * ec * j * (j - 1);

    HilbertSpace space({nlev, nr});
    auto [b, bd] = ladder_operators(nlev);
    auto [a, ad] = ladder_operators(nr);
    Matrix hq = Matrix::Zero(nlev, nlev);
    for (int j = 0; j < nlev; ++j) hq(j, j) = atom[static_cast<size_t>(j)];
    Matrix h = embed(Operator(HilbertSpace({nlev}), hq, true), 0, space).matrix() +
               omega_r * (embed(ad, 1, space) * embed(a, 1, space)).matrix() +
               g * ((embed(bd, 0, space) * embed(a, 1, space)).matrix() +
                    (embed(b, 0, space) * embed(ad, 1, space)).matrix());
    Eigen::MatrixXd table = dressed_level_table(Operator(space, h, true));
    for (int n = 0; n <= n_max; ++n) {
      auto pull = [&](int sigma) {
        if (sigma >= nlev) return 0.0;
        return (table(sigma, n + 1) - table(sigma, n)) / two_pi;
      };
      csv.row({static_cast<double>(nlev), static_cast<double>(n), pull(0), pull(1), pull(2)});
    }
  }
}

void run_spectrum_custom(const json& cfg, RunContext& ctx) {
  TransmissionSpec spec;
  spec.omega_r = two_pi * require_number(cfg, "omega_r_hz");
  spec.omega_q = two_pi * require_number(cfg, "omega_q_hz");
  spec.g = two_pi * require_number(cfg, "g_hz");
  spec.kappa = two_pi * number_or(cfg, "kappa_hz", 0.0);
  spec.gamma1 = two_pi * number_or(cfg, "gamma1_hz", 0.0);
  spec.gamma_phi = two_pi * number_or(cfg, "gamma_phi_hz", 0.0);
  spec.n_bar_kappa = number_or(cfg, "n_bar_kappa", 0.0);
  spec.epsilon = two_pi * require_number(cfg, "epsilon_hz");
  spec.resonator_dim = int_or(cfg, "resonator_dim", 5);
  int points = int_or(cfg, "points", 401);
  if (points < 2) throw Error(ErrorKind::config, "cli", "sweep needs at least 2 points");
  double lo = spec.omega_r + two_pi * require_number(cfg, "delta_min_hz");
  double hi = spec.omega_r + two_pi * require_number(cfg, "delta_max_hz");
  if (hi <= lo) throw Error(ErrorKind::config, "cli", "empty sweep range");
  auto grid = linspace(lo, hi, points);
  auto method = string_or(cfg, "method", "formula") == "master"
                    ? TransmissionMethod::master_equation
                    : TransmissionMethod::three_level_formula;
  Spectrum s = transmission_sweep(spec, grid, method);
  CsvWriter csv(ctx.file("transmission.csv"), {"omega_d_hz", "a2", "phase"});
  for (size_t k = 0; k < grid.size(); ++k)
    csv.row({grid[k] / two_pi, s.magnitude2[k], s.phase[k]});
}

// ---------------------------------------------------------------------------
// evolve handlers

void run_fig11(const json& cfg, RunContext& ctx) {
  double gamma1 = two_pi * number_or(cfg, "gamma1_hz", 0.1e6);
  double gamma_phi = two_pi * number_or(cfg, "gamma_phi_hz", 0.1e6);
  std::vector<double> omegas;
  if (cfg.contains("omega_r_list_hz"))
    for (const auto& v : cfg["omega_r_list_hz"]) omegas.push_back(two_pi * v.get<double>());
  else
    omegas = {two_pi * 0.1e6, two_pi * 0.5e6, two_pi * 1.0e6};
  int points = int_or(cfg, "points", 201);
  auto grid = linspace(-two_pi * 4e6, two_pi * 4e6, points);

  std::vector<std::string> header = {"delta_q_hz"};
  for (size_t i = 0; i < omegas.size(); ++i) {
    header.push_back("pe_formula_" + std::to_string(i));
    header.push_back("pe_master_" + std::to_string(i));
    header.push_back("probe_phase_" + std::to_string(i));
  }
  CsvWriter csv(ctx.file("fig11_lineshape.csv"), header);
  std::vector<std::vector<double>> cols;
  for (double omega : omegas) {
    cols.push_back(qubit_lineshape(omega, gamma1, gamma_phi, grid, LineshapeMethod::formula));
    cols.push_back(qubit_lineshape(omega, gamma1, gamma_phi, grid, LineshapeMethod::master_equation));
  }
  // Probe-tone phase at 2 chi / kappa = 1: arctan(2 chi <sz>/kappa).
  for (size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k] / two_pi};
    for (size_t i = 0; i < omegas.size(); ++i) {
      double pe = cols[2 * i + 1][k];
      row.push_back(cols[2 * i][k]);
      row.push_back(pe);
      row.push_back(std::atan(2.0 * pe - 1.0));
    }
    csv.row(row);
  }
}

void run_fig12(const json& cfg, RunContext& ctx) {
  // Panel (a): weak dispersive, drive at the bare cavity frequency.
  {
    AcStarkSpec spec;
    spec.chi = two_pi * number_or(cfg, "chi_weak_hz", 0.1e6);
    spec.kappa = two_pi * number_or(cfg, "kappa_hz", 0.1e6);
    spec.gamma1 = two_pi * number_or(cfg, "gamma1_hz", 0.1e6);
    spec.OmegaR = two_pi * number_or(cfg, "omega_R_hz", 0.1e6);
    spec.delta_r = 0.0;
    std::vector<double> eps;
    if (cfg.contains("epsilon_list_hz"))
      for (const auto& v : cfg["epsilon_list_hz"]) eps.push_back(two_pi * v.get<double>());
    else
      eps = {0.0, two_pi * 0.2e6, two_pi * 0.4e6};
    int points = int_or(cfg, "points_weak", 161);
    auto grid = linspace(-two_pi * 2e6, two_pi * 14e6, points);

    std::vector<std::string> header = {"delta_spec_hz"};
    std::vector<std::vector<double>> cols(eps.size());
    for (size_t i = 0; i < eps.size(); ++i) header.push_back("pe_eps" + std::to_string(i));
    parallel_for(static_cast<int>(eps.size()), ctx.threads, [&](int i) {
      AcStarkSpec s = spec;
      s.epsilon = eps[static_cast<size_t>(i)];
      double nbar = s.epsilon * s.epsilon / (s.chi * s.chi + s.kappa * s.kappa / 4.0);
      s.resonator_dim = std::max(8, static_cast<int>(nbar + 7.0 * std::sqrt(nbar) + 8.0));
      cols[static_cast<size_t>(i)] = two_tone_ac_stark(s, grid);
    });
    CsvWriter csv(ctx.file("fig12_weak_dispersive.csv"), header);
    for (size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid[k] / two_pi};
      for (const auto& c : cols) row.push_back(c[k]);
      csv.row(row);
    }
  }
  // Panel (b): strong dispersive, drive at the pulled frequency omega_r - chi.
  {
    AcStarkSpec spec;
    spec.chi = two_pi * number_or(cfg, "chi_strong_hz", 5e6);
    spec.kappa = two_pi * number_or(cfg, "kappa_hz", 0.1e6);
    spec.gamma1 = two_pi * number_or(cfg, "gamma1_hz", 0.1e6);
    spec.OmegaR = two_pi * number_or(cfg, "omega_R_hz", 0.1e6);
    spec.epsilon = two_pi * number_or(cfg, "epsilon_strong_hz", 0.1e6);
    spec.delta_r = spec.chi;  // omega_d = omega_r - chi
    double nbar = std::pow(2.0 * spec.epsilon / spec.kappa, 2);
    spec.resonator_dim = std::max(10, static_cast<int>(nbar + 7.0 * std::sqrt(nbar) + 8.0));
    int points = int_or(cfg, "points_strong", 361);
    auto grid = linspace(-two_pi * 15e6, two_pi * 95e6, points);
    std::vector<double> pe(grid.size());
    parallel_for(static_cast<int>(grid.size()), ctx.threads, [&](int k) {
      pe[static_cast<size_t>(k)] =
          two_tone_ac_stark(spec, {grid[static_cast<size_t>(k)]}).front();
    });
    CsvWriter csv(ctx.file("fig12_number_splitting.csv"), {"delta_spec_hz", "pe"});
    for (size_t k = 0; k < grid.size(); ++k) csv.row({grid[k] / two_pi, pe[k]});
  }
}

void run_evolve_custom(const json& cfg, RunContext& ctx) {
  // Jaynes-Cummings model in the frame rotating at the resonator frequency.
  double delta = two_pi * number_or(cfg, "delta_hz", 0.0);
  double g = two_pi * require_number(cfg, "g_hz");
  double kappa = two_pi * number_or(cfg, "kappa_hz", 0.0);
  double gamma1 = two_pi * number_or(cfg, "gamma1_hz", 0.0);
  double gamma_phi = two_pi * number_or(cfg, "gamma_phi_hz", 0.0);
  double n_bar = number_or(cfg, "n_bar_kappa", 0.0);
  double epsilon = two_pi * number_or(cfg, "epsilon_hz", 0.0);
  int nr = int_or(cfg, "resonator_dim", 5);
  double t_max = require_number(cfg, "t_max_s");
  int points = int_or(cfg, "points", 401);
  std::vector<int> initial{int_or(cfg, "initial_qubit", 1), int_or(cfg, "initial_photons", 0)};

  HilbertSpace space({2, nr});
  auto [b, bd] = ladder_operators(2);
  auto [a, ad] = ladder_operators(nr);
  Operator Sm = embed(b, 0, space), Sp = embed(bd, 0, space);
  Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
  Matrix h = delta * (Sp * Sm).matrix() + g * ((Ad * Sm).matrix() + (A * Sp).matrix()) +
             epsilon * (Ad + A).matrix();
  LindbladModel m{Operator(space, h, true), {}, {}};
  if (kappa > 0.0) m.collapse.push_back({kappa * (n_bar + 1.0), A});
  if (kappa > 0.0 && n_bar > 0.0) m.collapse.push_back({kappa * n_bar, Ad});
  if (gamma1 > 0.0) m.collapse.push_back({gamma1, Sm});
  if (gamma_phi > 0.0) m.collapse.push_back({2.0 * gamma_phi, Sp * Sm});

  auto grid = linspace(0.0, t_max, points);
  auto res = evolve(m, QuantumState::basis(space, initial), grid, {Sp * Sm, Ad * A, A});
  ctx.note_leakage(res.leakage_warnings, "evolve");
  CsvWriter csv(ctx.file("evolution.csv"), {"t_s", "p_e", "n_photon", "re_a", "im_a"});
  for (size_t k = 0; k < grid.size(); ++k) {
    auto e = [&](int c) { return res.expectations(static_cast<Eigen::Index>(k), c); };
    csv.row({grid[k], e(0).real(), e(1).real(), e(2).real(), e(2).imag()});
  }
}

// ---------------------------------------------------------------------------
// readout handlers

void run_fig7(const json& cfg, RunContext& ctx) {
  double kappa = two_pi * number_or(cfg, "kappa_hz", 1e6);
  int points = int_or(cfg, "points", 801);

  // Panels (a-c): pointer paths at one steady measurement photon.
  for (double ratio : {1.0, 10.0, 0.2}) {
    double chi = 0.5 * ratio * kappa;
    double eps = std::sqrt(chi * chi + kappa * kappa / 4.0);  // one photon
    auto grid = linspace(0.0, 12.0 / kappa, points);
    auto traj = pointer_evolution([eps](double) { return Complex(eps, 0.0); }, 0.0, chi, kappa, grid);
    char label[32];
    std::snprintf(label, sizeof(label), "%g", ratio);
    CsvWriter csv(ctx.file(std::string("fig7_path_ratio_") + label + ".csv"),
                  {"t_s", "re_alpha_g", "im_alpha_g", "re_alpha_e", "im_alpha_e"});
    for (size_t k = 0; k < grid.size(); ++k)
      csv.row({grid[k], traj.alpha_g[k].real(), traj.alpha_g[k].imag(), traj.alpha_e[k].real(),
               traj.alpha_e[k].imag()});
  }

  // Panel (d): SNR vs 2 chi / kappa at fixed drive amplitude.
  double eps = number_or(cfg, "epsilon_over_kappa", 0.5) * kappa;
  auto ratios = linspace(0.05, 3.0, int_or(cfg, "ratio_points", 120));
  CsvWriter csv(ctx.file("fig7_snr.csv"), {"two_chi_over_kappa", "snr_tau10", "snr_tau200"});
  std::vector<std::vector<double>> rows(ratios.size());
  parallel_for(static_cast<int>(ratios.size()), ctx.threads, [&](int k) {
    double chi = 0.5 * ratios[static_cast<size_t>(k)] * kappa;
    auto grid = linspace(0.0, 200.0 / kappa, 2001);
    auto traj = pointer_evolution([eps](double) { return Complex(eps, 0.0); }, 0.0, chi, kappa, grid);
    rows[static_cast<size_t>(k)] = {ratios[static_cast<size_t>(k)], snr(traj, 1.0, 10.0 / kappa),
                                    snr(traj, 1.0, 200.0 / kappa)};
  });
  for (const auto& r : rows) csv.row(r);
}

void run_readout_custom(const json& cfg, RunContext& ctx) {
  double chi = two_pi * require_number(cfg, "chi_hz");
  double kappa = two_pi * require_number(cfg, "kappa_hz");
  double delta_r = two_pi * number_or(cfg, "delta_r_hz", 0.0);
  double epsilon = two_pi * require_number(cfg, "epsilon_hz");
  double eta = number_or(cfg, "eta", 1.0);
  double t_max = number_or(cfg, "t_max_s", 20.0 / kappa);
  double tau_m = number_or(cfg, "tau_m_s", t_max);
  int points = int_or(cfg, "points", 1001);
  int shots = int_or(cfg, "shots", 20000);

  auto grid = linspace(0.0, t_max, points);
  auto traj = pointer_evolution([epsilon](double) { return Complex(epsilon, 0.0); }, delta_r, chi,
                                kappa, grid, two_pi * number_or(cfg, "gamma1_hz", 0.0));
  CsvWriter pcsv(ctx.file("pointer.csv"),
                 {"t_s", "re_alpha_g", "im_alpha_g", "re_alpha_e", "im_alpha_e"});
  for (size_t k = 0; k < grid.size(); ++k)
    pcsv.row({grid[k], traj.alpha_g[k].real(), traj.alpha_g[k].imag(), traj.alpha_e[k].real(),
              traj.alpha_e[k].imag()});

  double snr_value = snr(traj, eta, tau_m);
  auto records = synthesize_heterodyne_records(traj, eta, tau_m, shots, ctx.seed);
  CsvWriter gcsv(ctx.file("records_g.csv"), {"shot", "i", "q"});
  CsvWriter ecsv(ctx.file("records_e.csv"), {"shot", "i", "q"});
  for (int s = 0; s < shots; ++s) {
    gcsv.row({static_cast<double>(s), records.I_g[static_cast<size_t>(s)],
              records.Q_g[static_cast<size_t>(s)]});
    ecsv.row({static_cast<double>(s), records.I_e[static_cast<size_t>(s)],
              records.Q_e[static_cast<size_t>(s)]});
  }

  // Histograms of the projected records on a common axis.
  {
    double dx = records.mean_I_e - records.mean_I_g;
    double dy = records.mean_Q_e - records.mean_Q_g;
    double norm = std::hypot(dx, dy);
    double ux = (norm > 0) ? dx / norm : 1.0, uy = (norm > 0) ? dy / norm : 0.0;
    std::vector<double> sg, se;
    for (int s2 = 0; s2 < shots; ++s2) {
      sg.push_back(ux * records.I_g[static_cast<size_t>(s2)] +
                   uy * records.Q_g[static_cast<size_t>(s2)]);
      se.push_back(ux * records.I_e[static_cast<size_t>(s2)] +
                   uy * records.Q_e[static_cast<size_t>(s2)]);
    }
    double lo = std::min(*std::min_element(sg.begin(), sg.end()),
                         *std::min_element(se.begin(), se.end()));
    double hi = std::max(*std::max_element(sg.begin(), sg.end()),
                         *std::max_element(se.begin(), se.end()));
    const int bins = int_or(cfg, "histogram_bins", 101);
    double width = (hi - lo) / bins;
    std::vector<int> hg(static_cast<size_t>(bins), 0), he(static_cast<size_t>(bins), 0);
    for (double v : sg) ++hg[static_cast<size_t>(std::clamp(int((v - lo) / width), 0, bins - 1))];
    for (double v : se) ++he[static_cast<size_t>(std::clamp(int((v - lo) / width), 0, bins - 1))];
    CsvWriter hcsv(ctx.file("histogram.csv"), {"bin_center", "count_g", "count_e"});
    for (int b = 0; b < bins; ++b)
      hcsv.row({lo + (b + 0.5) * width, static_cast<double>(hg[static_cast<size_t>(b)]),
                static_cast<double>(he[static_cast<size_t>(b)])});
  }

  auto dephasing = measurement_dephasing_rate(traj.alpha_g, traj.alpha_e, chi, kappa, delta_r);
  json summary;
  summary["snr"] = snr_value;
  summary["fidelity_erfc"] = measurement_fidelity(snr_value);
  summary["fidelity_histogram"] = histogram_fidelity(records);
  summary["gamma_m_steady"] = dephasing.gamma_m_steady;
  summary["gamma_m_formula"] = dephasing.gamma_m_formula;
  summary["eta_recovered"] = (chi != 0.0) ? efficiency_from_snr(snr_value, traj, chi) : 0.0;
  auto st = steady_amplitude_phase(epsilon, delta_r, chi, kappa);
  summary["steady"] = {{"A_g", st.A_g}, {"A_e", st.A_e}, {"phi_g", st.phi_g}, {"phi_e", st.phi_e}};
  if (cfg.contains("chain")) {
    MeasurementChain chain;
    for (const auto& s : cfg["chain"])
      chain.stages.push_back({number_or(s, "gain", 1.0), number_or(s, "added_noise", 0.0),
                              number_or(s, "transmissivity", 1.0)});
    auto noise = chain_noise(chain);
    summary["chain"] = {{"N_T", noise.N_T},
                        {"N_T_approx", noise.N_T_approx},
                        {"eta", noise.eta},
                        {"eta_bar", noise.eta_bar},
                        {"total_gain", noise.total_gain}};
  }
  std::ofstream(ctx.file("readout_summary.json")) << summary.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// gate handler

void run_gate(const json& cfg, RunContext& ctx) {
  std::string type = string_or(cfg, "gate", "sqrt_iswap");
  json report;
  report["gate"] = type;
  if (type == "sqrt_iswap" || type == "iswap") {
    double J = two_pi * require_number(cfg, "j_hz");
    double t = (type == "sqrt_iswap") ? pi / (4.0 * J) : pi / (2.0 * J);
    GateResult r = iswap_gate(J, t);
    r.fidelity = average_gate_fidelity(r.unitary,
                                       type == "sqrt_iswap" ? sqrt_iswap_target() : iswap_target());
    report["duration_s"] = t;
    report["fidelity"] = r.fidelity;
    report["leakage"] = r.leakage;
  } else if (type == "cz_sudden" || type == "cz_adiabatic") {
    double J = two_pi * require_number(cfg, "j_hz");
    CzProtocol protocol;
    protocol.sudden = (type == "cz_sudden");
    if (!protocol.sudden) {
      protocol.delta_max = two_pi * require_number(cfg, "delta_max_hz");
      protocol.duration = require_number(cfg, "duration_s");
    }
    GateResult r = cz_11_02(J, protocol);
    report["conditional_phase"] = r.conditional_phase;
    report["phases"] = {{"phi01", r.phase_table[0]},
                        {"phi10", r.phase_table[1]},
                        {"phi11", r.phase_table[2]}};
    report["fidelity"] = r.fidelity;
    report["leakage"] = r.leakage;
  } else if (type == "cross_resonance") {
    auto c = cross_resonance_effective(two_pi * require_number(cfg, "j_hz"),
                                       two_pi * require_number(cfg, "delta12_hz"),
                                       require_number(cfg, "ec1_hz"), require_number(cfg, "ec2_hz"),
                                       two_pi * require_number(cfg, "epsilon_hz"));
    report["coefficients"] = {{"x1_hz", c.x1 / two_pi},
                              {"x2_hz", c.x2 / two_pi},
                              {"zx_hz", c.zx / two_pi},
                              {"zz_hz", c.zz / two_pi},
                              {"chi12_hz", c.chi12 / two_pi},
                              {"j_prime", c.Jprime}};
  } else if (type == "parametric") {
    auto s = parametric_sideband(two_pi * require_number(cfg, "j_hz"),
                                 two_pi * require_number(cfg, "epsilon_mod_hz"),
                                 two_pi * require_number(cfg, "omega_mod_hz"),
                                 two_pi * require_number(cfg, "delta12_hz"));
    report["sideband"] = s.n;
    report["residual_hz"] = s.residual / two_pi;
    report["effective_coupling_hz"] = s.effective_coupling / two_pi;
  } else if (type == "single_qubit") {
    DriveEnvelope env;
    std::string shape = string_or(cfg, "shape", "gaussian");
    env.shape = shape == "square"            ? PulseShape::square
                : shape == "gaussian_drag"   ? PulseShape::gaussian_drag
                                             : PulseShape::gaussian;
    env.duration = require_number(cfg, "duration_s");
    env.sigma = number_or(cfg, "sigma_s", env.duration / 4.0);
    env.drag_coefficient = number_or(cfg, "drag_coefficient", 1.0);
    env.phase = number_or(cfg, "phase_rad", 0.0);
    double area = number_or(cfg, "area_rad", pi);
    // Calibrate the amplitude to the requested rotation area.
    env.amplitude = 1.0;
    double ec = require_number(cfg, "ec_hz");
    env.amplitude = 0.5 * area / env.pulse_area(two_pi * ec);
    Matrix target(2, 2);
    target << std::cos(area / 2.0), Complex(0.0, -std::sin(area / 2.0)),
        Complex(0.0, -std::sin(area / 2.0)), std::cos(area / 2.0);
    GateResult r = single_qubit_gate(env, int_or(cfg, "transmon_dim", 3), ec, target);
    report["fidelity"] = r.fidelity;
    report["leakage"] = r.leakage;
  } else {
    throw Error(ErrorKind::config, "cli", "unknown gate type '" + type + "'");
  }
  std::ofstream(ctx.file("gate_report.json")) << report.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// code handler

void run_code(const json& cfg, RunContext& ctx) {
  std::string which = string_or(cfg, "code", "binomial");
  CodeSpec code;
  std::function<std::vector<Matrix>(double)> channel;
  if (which == "binomial") {
    int dim = int_or(cfg, "dim", 8);
    code = binomial_code(dim);
    channel = [dim](double kt) { return amplitude_damping_kraus(kt, dim).kraus; };
  } else if (which == "cat2" || which == "cat4") {
    int dim = int_or(cfg, "dim", 30);
    code = cat_code(number_or(cfg, "alpha", 2.0), which == "cat2" ? 2 : 4, dim);
    channel = [dim](double kt) { return amplitude_damping_kraus(kt, dim).kraus; };
  } else if (which == "four_qubit") {
    code = four_qubit_code();
    channel = [](double gt) { return four_qubit_damping(gt).kraus; };
  } else {
    throw Error(ErrorKind::config, "cli", "unknown code '" + which + "'");
  }

  json spec_json;
  spec_json["name"] = code.name;
  spec_json["dims"] = code.space.dims();
  for (const auto& w : code.codewords) {
    json amps = json::array();
    for (Eigen::Index k = 0; k < w.size(); ++k)
      amps.push_back({{"re", w(k).real()}, {"im", w(k).imag()}});
    spec_json["codewords"].push_back(amps);
  }
  std::ofstream(ctx.file("code_spec.json")) << spec_json.dump(2) << "\n";

  auto kl = knill_laflamme_check(code, code.error_set);
  std::vector<double> grid;
  int npts = int_or(cfg, "kappa_t_points", 9);
  double lo = number_or(cfg, "kappa_t_min", 1e-3), hi = number_or(cfg, "kappa_t_max", 3e-2);
  for (int k = 0; k < npts; ++k)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (npts - 1)));
  auto scaling = kl_scaling(code, channel, grid);
  auto bench = recovery_benchmark(code, channel, grid);

  CsvWriter csv(ctx.file("recovery_curve.csv"),
                {"kappa_t", "infidelity_recovered", "infidelity_bare"});
  for (size_t k = 0; k < grid.size(); ++k)
    csv.row({grid[k], bench.infidelity_recovered[k], bench.infidelity_bare[k]});

  json report;
  report["kl_max_offdiagonal"] = kl.max_offdiagonal;
  report["kl_max_asymmetry"] = kl.max_asymmetry;
  report["kl_satisfied_exactly"] = kl.satisfied_exactly;
  report["kl_channel_verdict"] = scaling.verdict == KlOrder::exact        ? "exact"
                                 : scaling.verdict == KlOrder::first_order ? "first_order"
                                                                           : "violated";
  report["kl_residual_exponent"] = scaling.exponent;
  report["recovered_exponent"] = bench.exponent_recovered;
  report["bare_exponent"] = bench.exponent_bare;
  std::ofstream(ctx.file("code_report.json")) << report.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// phasespace handlers

void write_surface(RunContext& ctx, const std::string& name, const PhaseSpaceFunction& f) {
  CsvWriter csv(ctx.file(name), {"x", "p", "value"});
  for (int i = 0; i < f.grid.resolution; ++i)
    for (int j = 0; j < f.grid.resolution; ++j) csv.row({f.grid.x(i), f.grid.p(j), f.values(i, j)});
}

void run_fig17(const json& cfg, RunContext& ctx) {
  SqueezeParams sq{number_or(cfg, "r", 0.75), number_or(cfg, "theta", pi / 2.0)};
  int dim = int_or(cfg, "dim", 40);
  Operator s = squeeze_operator(sq, dim);
  Vector vac = Vector::Zero(dim);
  vac(0) = 1.0;
  Vector state = s.matrix() * vac;
  QuantumState squeezed = QuantumState::ket(HilbertSpace({dim}), state / state.norm());
  PhaseSpaceGrid grid;
  grid.x_min = grid.p_min = -4.0;
  grid.x_max = grid.p_max = 4.0;
  write_surface(ctx, "fig17_wigner.csv", wigner(squeezed, grid));

  CsvWriter csv(ctx.file("fig17_squeezing_level.csv"),
                {"phi", "db_r05", "db_r10", "db_r15"});
  for (double phi : linspace(0.0, two_pi, 361))
    csv.row({phi, squeezing_level_db({0.5, pi}, phi), squeezing_level_db({1.0, pi}, phi),
             squeezing_level_db({1.5, pi}, phi)});
}

void run_fig18(const json& cfg, RunContext& ctx) {
  double alpha = number_or(cfg, "alpha", 4.0);
  int dim = int_or(cfg, "dim", 56);
  PhaseSpaceGrid grid;
  grid.x_min = grid.p_min = -6.5;
  grid.x_max = grid.p_max = 6.5;
  for (int legs : {4, 2}) {
    CodeSpec code = cat_code(alpha, legs, dim);
    QuantumState word = QuantumState::ket(code.space, code.codewords[0]);
    write_surface(ctx, "fig18_cat" + std::to_string(legs) + "_wigner.csv", wigner(word, grid));
  }
}

void run_phasespace_custom(const json& cfg, RunContext& ctx) {
  std::string kind = string_or(cfg, "state", "coherent");
  int dim = int_or(cfg, "dim", 30);
  QuantumState state = [&]() -> QuantumState {
    if (kind == "coherent")
      return coherent_state(Complex(number_or(cfg, "alpha_re", 1.0), number_or(cfg, "alpha_im", 0.0)),
                            dim);
    if (kind == "fock") {
      int n = int_or(cfg, "n", 1);
      if (n < 0 || n >= dim) throw Error(ErrorKind::config, "cli", "fock index out of range");
      Vector v = Vector::Zero(dim);
      v(n) = 1.0;
      return QuantumState::ket(HilbertSpace({dim}), v);
    }
    if (kind == "squeezed") {
      Operator s = squeeze_operator({number_or(cfg, "r", 1.0), number_or(cfg, "theta", 0.0)}, dim);
      Vector vac = Vector::Zero(dim);
      vac(0) = 1.0;
      Vector v = s.matrix() * vac;
      return QuantumState::ket(HilbertSpace({dim}), v / v.norm());
    }
    if (kind == "cat2" || kind == "cat4") {
      CodeSpec code = cat_code(number_or(cfg, "alpha", 2.0), kind == "cat2" ? 2 : 4, dim);
      return QuantumState::ket(code.space, code.codewords[0]);
    }
    throw Error(ErrorKind::config, "cli", "unknown state '" + kind + "'");
  }();

  PhaseSpaceGrid grid;
  grid.x_min = grid.p_min = -number_or(cfg, "range", 5.0);
  grid.x_max = grid.p_max = number_or(cfg, "range", 5.0);
  grid.resolution = int_or(cfg, "resolution", 101);
  auto w = wigner(state, grid);
  write_surface(ctx, "wigner.csv", w);
  write_surface(ctx, "husimi_q.csv", husimi_q(state, grid));
  double angle = number_or(cfg, "marginal_angle", 0.0);
  Marginal m = marginal(w, angle);
  CsvWriter csv(ctx.file("marginal.csv"), {"quadrature", "density"});
  for (size_t k = 0; k < m.quadrature.size(); ++k) csv.row({m.quadrature[k], m.density[k]});
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> catalog = [] {
    std::vector<ScenarioInfo> v;
    v.push_back({"fig5", "spectrum",
                 "Transmon charge dispersion vs offset charge for EJ/EC in {1,5,10,50}",
                 json{{"scenario", "fig5"}, {"plasma_frequency_hz", 5e9}, {"ncut", 30}}});
    v.push_back({"fig7", "readout",
                 "Pointer-state paths and SNR vs 2chi/kappa at tau_m*kappa in {10,200}",
                 json{{"scenario", "fig7"}, {"kappa_hz", 1e6}, {"epsilon_over_kappa", 0.5}}});
    v.push_back(
        {"fig8", "spectrum",
         "Vacuum Rabi regimes: (kappa,gamma1,g)/2pi = (10,0,1), (0,10,1), (0.1,0.1,100) MHz "
         "transmission and time evolution, with an n_bar=0.35 thermal variant",
         json{{"scenario", "fig8"}, {"n_bar_kappa", 0.35}}});
    v.push_back({"fig9", "spectrum",
                 "Two-transmon avoided crossings with EJ/h=28.48(42.34) GHz, EC/h=317(297) MHz, "
                 "g/2pi=199(190) MHz, 5+5+5 levels",
                 json{{"scenario", "fig9"},
                      {"ej1_hz", 28.48e9},
                      {"ej2_hz", 42.34e9},
                      {"ec1_hz", 317e6},
                      {"ec2_hz", 297e6},
                      {"g1_hz", 199e6},
                      {"g2_hz", 190e6},
                      {"omega_r_hz", 7.0e9},
                      {"transmon_levels", 5},
                      {"resonator_levels", 5}}});
    v.push_back({"fig11", "evolve",
                 "Power-broadened qubit lineshape, Omega_R/2pi in {0.1,0.5,1} MHz, "
                 "gamma1 = gamma_phi = 2pi*0.1 MHz",
                 json{{"scenario", "fig11"}, {"gamma1_hz", 0.1e6}, {"gamma_phi_hz", 0.1e6}}});
    v.push_back({"fig12", "evolve",
                 "ac-Stark shift and photon-number splitting, chi/2pi = 0.1 and 5 MHz",
                 json{{"scenario", "fig12"},
                      {"chi_weak_hz", 0.1e6},
                      {"chi_strong_hz", 5e6},
                      {"kappa_hz", 0.1e6},
                      {"gamma1_hz", 0.1e6},
                      {"omega_R_hz", 0.1e6}}});
    v.push_back({"fig13", "spectrum",
                 "Nonlinear cavity pull with (w01,w12,g)/2pi = (6,5.75,0.1) GHz for 2/3/6 levels",
                 json{{"scenario", "fig13"},
                      {"f01_hz", 6e9},
                      {"f12_hz", 5.75e9},
                      {"g_hz", 0.1e9},
                      {"omega_r_hz", 5e9}}});
    v.push_back({"fig17", "phasespace",
                 "Squeezed vacuum Wigner function (r=0.75, theta=pi/2) and squeezing level in dB",
                 json{{"scenario", "fig17"}, {"r", 0.75}, {"theta", pi / 2.0}}});
    v.push_back({"fig18", "phasespace", "Four- and two-component cat-state Wigner functions, alpha=4",
                 json{{"scenario", "fig18"}, {"alpha", 4.0}, {"dim", 56}}});
    return v;
  }();
  return catalog;
}

uint64_t config_hash(const json& config) {
  // FNV-1a over the canonical dump (nlohmann sorts object keys).
  std::string s = config.dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunOutcome run_scenario(const std::string& subcommand, const json& config, const std::string& out_dir,
                        uint64_t seed, int threads) {
  RunOutcome outcome;
  auto started = std::chrono::steady_clock::now();
  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  ctx.threads = std::max(1, threads);
  try {
    fs::create_directories(ctx.out_dir);
    std::string scenario = string_or(config, "scenario", "custom");

    const ScenarioInfo* preset = nullptr;
    for (const auto& s : list_scenarios())
      if (s.name == scenario) preset = &s;
    if (scenario != "custom") {
      if (!preset) throw Error(ErrorKind::config, "cli", "unknown scenario '" + scenario + "'");
      if (preset->subcommand != subcommand)
        throw Error(ErrorKind::config, "cli",
                    "scenario '" + scenario + "' belongs to subcommand '" + preset->subcommand + "'");
    }
    json cfg = preset ? preset->default_config : json{{"scenario", "custom"}};
    for (auto it = config.begin(); it != config.end(); ++it) cfg[it.key()] = it.value();

    if (subcommand == "spectrum") {
      if (scenario == "fig5") run_fig5(cfg, ctx);
      else if (scenario == "fig8") run_fig8(cfg, ctx);
      else if (scenario == "fig9") run_fig9(cfg, ctx);
      else if (scenario == "fig13") run_fig13(cfg, ctx);
      else run_spectrum_custom(cfg, ctx);
    } else if (subcommand == "evolve") {
      if (scenario == "fig11") run_fig11(cfg, ctx);
      else if (scenario == "fig12") run_fig12(cfg, ctx);
      else run_evolve_custom(cfg, ctx);
    } else if (subcommand == "readout") {
      if (scenario == "fig7") run_fig7(cfg, ctx);
      else run_readout_custom(cfg, ctx);
    } else if (subcommand == "gate") {
      run_gate(cfg, ctx);
    } else if (subcommand == "code") {
      run_code(cfg, ctx);
    } else if (subcommand == "phasespace") {
      if (scenario == "fig17") run_fig17(cfg, ctx);
      else if (scenario == "fig18") run_fig18(cfg, ctx);
      else run_phasespace_custom(cfg, ctx);
    } else {
      throw Error(ErrorKind::config, "cli", "unknown subcommand '" + subcommand + "'");
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest;
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    manifest["config_hash"] = hash_hex;
    manifest["version"] = version();
    manifest["seed"] = seed;
    manifest["wall_time_s"] = wall;
    manifest["warnings"] = ctx.warnings;
    manifest["outputs"] = ctx.outputs;
    std::ofstream(ctx.out_dir / "manifest.json") << manifest.dump(2) << "\n";
    outcome.output_files = ctx.outputs;
    outcome.output_files.push_back("manifest.json");
    outcome.warnings = ctx.warnings;
  } catch (const Error& err) {
    outcome.exit_code = 1;
    outcome.error = {{"module", err.module()},
                     {"kind", error_kind_name(err.kind())},
                     {"message", err.what()}};
  } catch (const std::exception& err) {
    outcome.exit_code = 1;
    outcome.error = {{"module", "cli"}, {"kind", "internal"}, {"message", err.what()}};
  }
  return outcome;
}

}  // namespace cqed
