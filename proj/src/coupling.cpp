#include "cqed/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace cqed {

void RabiSystem::validate() const {
  if (transmon_dim < 2 || resonator_dim < 2)
    throw Error(ErrorKind::invalid_dimension, "coupling", "subsystem dims must be >= 2");
  if (g < 0.0) throw Error(ErrorKind::invalid_argument, "coupling", "g must be non-negative");
  if (transmon_dim > 2 && EC <= 0.0)
    throw Error(ErrorKind::invalid_argument, "coupling", "multilevel transmon needs EC > 0");
}

Operator rabi_hamiltonian(const RabiSystem& sys) {
  sys.validate();
  HilbertSpace space = sys.space();
  auto [b, bd] = ladder_operators(sys.transmon_dim);
  auto [a, ad] = ladder_operators(sys.resonator_dim);
  Operator B = embed(b, 0, space), Bd = embed(bd, 0, space);
  Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);

  double ec = two_pi * sys.EC;
  Matrix h = sys.omega_r * (Ad * A).matrix() + sys.omega_q * (Bd * B).matrix() -
             0.5 * ec * (Bd * Bd * B * B).matrix();
  if (sys.rwa) {
    h += sys.g * ((Bd * A).matrix() + (B * Ad).matrix());
  } else {
    h += -sys.g * ((Bd - B) * (Ad - A)).matrix();
  }
  return Operator(space, std::move(h), true);
}

JCDoublet jc_spectrum(int n, double omega_r, double omega_q, double g) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "coupling", "excitation number must be >= 1");
  double delta = omega_q - omega_r;
  double split = std::sqrt(delta * delta + 4.0 * g * g * n);
  JCDoublet d;
  d.E_lower = n * omega_r - 0.5 * split;
  d.E_upper = n * omega_r + 0.5 * split;
  d.theta_n = std::atan2(2.0 * g * std::sqrt(static_cast<double>(n)), delta);
  return d;
}

Operator jc_diagonalizing_unitary(const RabiSystem& sys) {
  sys.validate();
  if (sys.transmon_dim != 2 || !sys.rwa)
    throw Error(ErrorKind::invalid_argument, "coupling", "JC unitary defined for two-level RWA systems");
  double delta = sys.omega_q - sys.omega_r;
  if (delta == 0.0) throw Error(ErrorKind::resonance, "coupling", "lambda = g/Delta undefined at Delta = 0");
  double lambda = sys.g / delta;

  HilbertSpace space = sys.space();
  auto [b, bd] = ladder_operators(2);
  auto [a, ad] = ladder_operators(sys.resonator_dim);
  Matrix sm = embed(b, 0, space).matrix();   // sigma- on the two-level transmon
  Matrix sp = embed(bd, 0, space).matrix();
  Matrix A = embed(a, 1, space).matrix();
  Matrix Ad = embed(ad, 1, space).matrix();

  Matrix m = Ad * sm - A * sp;  // anti-Hermitian generator direction
  Matrix nt = Ad * A + sp * sm; // total excitation number, diagonal here

  // Lambda(N_T) = arctan(2 lambda sqrt(N_T)) / (2 sqrt(N_T)), -> lambda at 0.
  Matrix lam = Matrix::Zero(space.total_dim(), space.total_dim());
  for (int k = 0; k < space.total_dim(); ++k) {
    double ntk = nt(k, k).real();
    double root = std::sqrt(std::max(ntk, 0.0));
    lam(k, k) = (root < 1e-12) ? lambda : std::atan(2.0 * lambda * root) / (2.0 * root);
  }
  // [N_T, m] = 0, so lam*m stays anti-Hermitian; exponentiate exactly.
  Matrix gen = lam * m;
  Matrix u = hermitian_propagator(Complex(0.0, 1.0) * gen, 1.0);  // exp(gen)
  return Operator(space, std::move(u), false);
}

namespace {
void check_not_straddling(double delta, double ec_angular) {
  if (delta > 0.0 && delta < ec_angular)
    throw Error(ErrorKind::straddling_regime, "coupling",
                "0 < Delta < E_C/hbar: perturbative dispersive theory invalid, use exact diagonalization");
  if (delta == 0.0 || std::abs(delta - ec_angular) < 1e-12 * std::max(1.0, ec_angular))
    throw Error(ErrorKind::resonance, "coupling", "vanishing dispersive denominator");
}
}  // namespace

DispersiveParams dispersive_params_sw(double omega_r, double omega_q, double EC, double g, int levels) {
  if (EC <= 0.0) throw Error(ErrorKind::invalid_argument, "coupling", "EC must be positive");
  if (levels < 2) throw Error(ErrorKind::invalid_argument, "coupling", "need at least two levels");
  double ec = two_pi * EC;
  double delta = omega_q - omega_r;
  check_not_straddling(delta, ec);

  auto chi_ladder = [&](int j) {  // chi_{j-1,j} = j g^2 / (Delta - (j-1) Ec)
    double den = delta - (j - 1) * ec;
    if (den == 0.0)
      throw Error(ErrorKind::resonance, "coupling",
                  "dispersive denominator vanishes at level j=" + std::to_string(j));
    return j * g * g / den;
  };

  DispersiveParams p;
  p.Delta = delta;
  p.lambda = g / delta;
  p.chi = -g * g * ec / (delta * (delta - ec));
  p.omega_r_dressed = omega_r - g * g / (delta - ec);
  p.omega_q_dressed = omega_q + g * g / delta;
  p.K_a = -0.5 * ec * std::pow(g / delta, 4);
  p.K_b = -ec;
  p.chi_ab = -2.0 * g * g * ec / (delta * (delta - ec));
  for (int j = 0; j < levels; ++j) {
    p.Lambda_j.push_back(j == 0 ? 0.0 : chi_ladder(j));
    p.chi_j.push_back((j == 0 ? 0.0 : chi_ladder(j)) - chi_ladder(j + 1));
    double dj = std::abs(delta - j * ec);
    p.n_crit.push_back((dj * dj / (4.0 * g * g) - j) / (2.0 * j + 1.0));
  }
  return p;
}

BogoliubovDressed bogoliubov_dressed(double omega_r, double omega_q, double g) {
  double delta = omega_q - omega_r;
  double root = std::sqrt(delta * delta + 4.0 * g * g);
  BogoliubovDressed d;
  d.omega_r_tilde = 0.5 * (omega_r + omega_q - root);
  d.omega_q_tilde = 0.5 * (omega_r + omega_q + root);
  d.Lambda_angle = 0.5 * std::atan2(2.0 * g, delta);
  return d;
}

KerrParams kerr_params(double omega_r, double omega_q, double EC, double g) {
  if (EC <= 0.0) throw Error(ErrorKind::invalid_argument, "coupling", "EC must be positive");
  double ec = two_pi * EC;
  double delta = omega_q - omega_r;
  if (g != 0.0) check_not_straddling(delta, ec);
  KerrParams k;
  k.K_b = -ec;
  if (g == 0.0) return k;
  k.K_a = -0.5 * ec * std::pow(g / delta, 4);
  k.chi_ab = -2.0 * g * g * ec / (delta * (delta - ec));
  return k;
}

MultilevelShifts multilevel_dispersive(const MultilevelAtom& atom, double omega_r) {
  const int n = static_cast<int>(atom.level_energies.size());
  if (atom.coupling.rows() != n || atom.coupling.cols() != n)
    throw Error(ErrorKind::invalid_dimension, "coupling", "coupling matrix does not match level count");
  const auto& w = atom.level_energies;
  MultilevelShifts out;
  out.Lambda_j.assign(static_cast<size_t>(n), 0.0);
  out.chi_j.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double lam = 0.0, chi = 0.0;
    for (int i = 0; i < n; ++i) {
      double gij2 = std::norm(atom.coupling(i, j));
      double gji2 = std::norm(atom.coupling(j, i));
      if (gij2 != 0.0) {
        double den = w[static_cast<size_t>(j)] - w[static_cast<size_t>(i)] - omega_r;
        if (std::abs(den) < 1e-9 * std::max(1.0, omega_r))
          throw Error(ErrorKind::resonance, "coupling",
                      "resonant transition (" + std::to_string(i) + "," + std::to_string(j) + ")");
        lam += gij2 / den;
        chi += gij2 / den;
      }
      if (gji2 != 0.0) {
        double den = w[static_cast<size_t>(i)] - w[static_cast<size_t>(j)] - omega_r;
        if (std::abs(den) < 1e-9 * std::max(1.0, omega_r))
          throw Error(ErrorKind::resonance, "coupling",
                      "resonant transition (" + std::to_string(i) + "," + std::to_string(j) + ")");
        chi -= gji2 / den;
      }
    }
    out.Lambda_j[static_cast<size_t>(j)] = lam;
    out.chi_j[static_cast<size_t>(j)] = chi;
  }
  return out;
}

SchriefferWolffResult schrieffer_wolff_order2(const RealVector& energies, const Matrix& v,
                                              const std::vector<int>& subspace) {
  const Eigen::Index n = energies.size();
  if (v.rows() != n || v.cols() != n || static_cast<Eigen::Index>(subspace.size()) != n)
    throw Error(ErrorKind::invalid_dimension, "coupling", "SW inputs have inconsistent dimensions");

  double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());

  // Minimum gap between states in different subspaces, and the largest
  // off-block coupling element; 2 max|V| >= gap only earns a warning.
  double min_gap = std::numeric_limits<double>::infinity();
  double max_off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (subspace[static_cast<size_t>(i)] == subspace[static_cast<size_t>(j)]) continue;
      double gap = std::abs(energies(i) - energies(j));
      min_gap = std::min(min_gap, gap);
      max_off = std::max(max_off, std::abs(v(i, j)));
      if (gap < 1e-12 * scale && std::abs(v(i, j)) > 0.0)
        throw Error(ErrorKind::degeneracy, "coupling", "degenerate levels across subspaces");
    }

  SchriefferWolffResult r;
  r.gap_warning = (2.0 * max_off >= min_gap);
  r.generator = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (subspace[static_cast<size_t>(i)] == subspace[static_cast<size_t>(j)]) continue;
      r.generator(i, j) = v(i, j) / (energies(i) - energies(j));
    }

  Matrix heff = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) heff(i, i) = energies(i);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (subspace[static_cast<size_t>(i)] == subspace[static_cast<size_t>(j)]) heff(i, j) += v(i, j);
  // Second order, block-diagonal by construction.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (subspace[static_cast<size_t>(i)] != subspace[static_cast<size_t>(j)]) continue;
      Complex acc = 0.0;
      for (Eigen::Index l = 0; l < n; ++l) {
        if (subspace[static_cast<size_t>(l)] == subspace[static_cast<size_t>(i)]) continue;
        acc += v(i, l) * v(l, j) * 0.5 *
               (1.0 / (energies(i) - energies(l)) + 1.0 / (energies(j) - energies(l)));
      }
      heff(i, j) += acc;
    }
  r.effective_h = std::move(heff);
  return r;
}

Eigen::MatrixXd dressed_level_table(const Operator& h) {
  if (h.space().subsystems() != 2)
    throw Error(ErrorKind::invalid_dimension, "coupling", "dressed table needs a two-subsystem space");
  const int dq = h.space().dim(0), dr = h.space().dim(1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const int n = h.dim();

  // Rank eigenvector-to-bare-state claims by overlap; greedy assignment.
  struct Claim {
    double overlap;
    int eig, bare;
  };
  std::vector<Claim> claims;
  claims.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      claims.push_back({std::norm(es.eigenvectors()(b, e)), e, b});
  std::sort(claims.begin(), claims.end(), [](const Claim& x, const Claim& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    return x.eig < y.eig;  // energy order breaks ties
  });
  std::vector<int> bare_of_eig(static_cast<size_t>(n), -1);
  std::vector<bool> bare_taken(static_cast<size_t>(n), false);
  int assigned = 0;
  for (const auto& c : claims) {
    if (assigned == n) break;
    if (bare_of_eig[static_cast<size_t>(c.eig)] != -1 || bare_taken[static_cast<size_t>(c.bare)]) continue;
    bare_of_eig[static_cast<size_t>(c.eig)] = c.bare;
    bare_taken[static_cast<size_t>(c.bare)] = true;
    ++assigned;
  }

  Eigen::MatrixXd table(dq, dr);
  for (int e = 0; e < n; ++e) {
    int bare = bare_of_eig[static_cast<size_t>(e)];
    table(bare / dr, bare % dr) = es.eigenvalues()(e);
  }
  return table;
}

double chi_exact_from_diagonalization(const RabiSystem& sys) {
  Eigen::MatrixXd table = dressed_level_table(rabi_hamiltonian(sys));
  return (table(1, 1) - table(1, 0) - table(0, 1) + table(0, 0)) / 2.0;
}

}  // namespace cqed
