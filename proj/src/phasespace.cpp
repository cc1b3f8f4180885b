#include "cqed/phasespace.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cqed {

void PhaseSpaceGrid::validate() const {
  if (resolution < 32)
    throw Error(ErrorKind::invalid_argument, "phasespace", "grid resolution must be >= 32");
  if (x_max <= x_min || p_max <= p_min)
    throw Error(ErrorKind::invalid_argument, "phasespace", "grid ranges must be increasing");
}

double PhaseSpaceFunction::integral() const {
  return values.sum() * grid.dx() * grid.dp();
}

QuantumState coherent_state(Complex alpha, int dim, double leakage_tol) {
  if (dim < 2) throw Error(ErrorKind::invalid_dimension, "phasespace", "dim must be >= 2");
  Vector amps(dim);
  double n2 = std::norm(alpha);
  // c_n = e^{-|a|^2/2} a^n / sqrt(n!)
  Complex c = std::exp(-0.5 * n2);
  double captured = 0.0;
  for (int n = 0; n < dim; ++n) {
    amps(n) = c;
    captured += std::norm(c);
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  double leakage = std::max(0.0, 1.0 - captured);
  if (leakage > leakage_tol)
    throw Error(ErrorKind::leakage, "phasespace",
                "coherent-state tail " + std::to_string(leakage) + " exceeds tolerance; increase dim");
  amps /= amps.norm();
  return QuantumState::ket(HilbertSpace({dim}), std::move(amps));
}

namespace {

// Infinite-dimensional matrix elements of D(alpha) restricted to the first
// dim levels, via D = e^{-|a|^2/2} e^{alpha a'} e^{-alpha* a} with both
// factors triangular. Element-exact, but not unitary near the truncation
// edge; phase-space kernels that only contract against truncated states can
// use it without error.
Matrix displacement_elements(Complex alpha, int dim) {
  Matrix lower = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    lower(n, n) = 1.0;
    for (int m = n + 1; m < dim; ++m)
      lower(m, n) = lower(m - 1, n) * alpha * std::sqrt(static_cast<double>(m)) /
                    static_cast<double>(m - n);
  }
  Matrix upper = Matrix::Zero(dim, dim);
  Complex neg_conj = -std::conj(alpha);
  for (int m = 0; m < dim; ++m) {
    upper(m, m) = 1.0;
    for (int n = m + 1; n < dim; ++n)
      upper(m, n) = upper(m, n - 1) * neg_conj * std::sqrt(static_cast<double>(n)) /
                    static_cast<double>(n - m);
  }
  return std::exp(-0.5 * std::norm(alpha)) * (lower * upper);
}

}  // namespace

Operator displacement_operator(Complex alpha, int dim) {
  if (dim < 2) throw Error(ErrorKind::invalid_dimension, "phasespace", "dim must be >= 2");
  // Exponential of the truncated generator: exactly unitary on the
  // truncated space, and matches D(alpha)|n> within truncation for states
  // away from the edge.
  auto [a, ad] = ladder_operators(dim);
  Matrix gen = alpha * ad.matrix() - std::conj(alpha) * a.matrix();
  Matrix u = hermitian_propagator(Complex(0.0, 1.0) * gen, 1.0);
  return Operator(HilbertSpace({dim}), std::move(u));
}

PhaseSpaceFunction wigner(const QuantumState& state, const PhaseSpaceGrid& grid) {
  grid.validate();
  if (state.space().subsystems() != 1)
    throw Error(ErrorKind::invalid_dimension, "phasespace", "phase-space maps need a single mode");
  const int dim = state.space().total_dim();

  PhaseSpaceFunction out;
  out.grid = grid;
  out.values.resize(grid.resolution, grid.resolution);

  // Displaced parity, contracted analytically: D(a) P D'(a) = D(2a) P, so
  // W(alpha) = (2/pi) Tr[rho D(2 alpha) P]. With element-exact D this is the
  // exact Wigner function of the truncated state at every grid point.
  Matrix rho = state.density_matrix();
  Matrix parity_rho = rho;
  for (int n = 1; n < dim; n += 2) parity_rho.row(n) *= -1.0;  // P rho
  Matrix prt = parity_rho.transpose();
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      Complex alpha(grid.x(i), grid.p(j));
      Matrix d = displacement_elements(2.0 * alpha, dim);
      // Tr[rho D P] = Tr[(P rho) D] = sum_{mn} (P rho)_{mn} D_{nm}.
      Complex w = prt.cwiseProduct(d).sum();
      out.values(i, j) = (2.0 / pi) * w.real();
    }
  }
  return out;
}

PhaseSpaceFunction husimi_q(const QuantumState& state, const PhaseSpaceGrid& grid) {
  grid.validate();
  if (state.space().subsystems() != 1)
    throw Error(ErrorKind::invalid_dimension, "phasespace", "phase-space maps need a single mode");
  const int dim = state.space().total_dim();

  PhaseSpaceFunction out;
  out.grid = grid;
  out.values.resize(grid.resolution, grid.resolution);

  const bool pure = state.is_ket();
  Matrix rho;
  if (!pure) rho = state.density_matrix();
  Vector coh(dim);
  for (int i = 0; i < grid.resolution; ++i) {
    for (int j = 0; j < grid.resolution; ++j) {
      Complex alpha(grid.x(i), grid.p(j));
      // Truncated coherent amplitudes without renormalization; the dropped
      // tail only matters where the state has no support.
      Complex c = std::exp(-0.5 * std::norm(alpha));
      for (int n = 0; n < dim; ++n) {
        coh(n) = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
      }
      double q;
      if (pure) {
        q = std::norm(coh.dot(state.ket_vector()));
      } else {
        q = (coh.dot(rho * coh)).real();
      }
      out.values(i, j) = q / pi;
    }
  }
  return out;
}

PhaseSpaceFunction convolve_with_vacuum(const PhaseSpaceFunction& w) {
  const auto& g = w.grid;
  const int n = g.resolution;
  // Separable kernel (2/pi) e^{-2 dx^2} e^{-2 dp^2}.
  Eigen::MatrixXd kx(n, n), kp(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double ddx = g.x(i) - g.x(k);
      double ddp = g.p(i) - g.p(k);
      kx(i, k) = std::exp(-2.0 * ddx * ddx);
      kp(i, k) = std::exp(-2.0 * ddp * ddp);
    }
  PhaseSpaceFunction out;
  out.grid = g;
  out.values = (2.0 / pi) * g.dx() * g.dp() * (kx * w.values * kp.transpose());
  return out;
}

Marginal marginal(const PhaseSpaceFunction& f, double phi) {
  const auto& g = f.grid;
  const int n = g.resolution;
  double c = std::cos(phi), s = std::sin(phi);

  auto sample = [&](double x, double p) -> double {
    double fi = (x - g.x_min) / g.dx();
    double fj = (p - g.p_min) / g.dp();
    int i0 = static_cast<int>(std::floor(fi)), j0 = static_cast<int>(std::floor(fj));
    if (i0 < 0 || j0 < 0 || i0 + 1 >= n || j0 + 1 >= n) return 0.0;
    double ti = fi - i0, tj = fj - j0;
    return f.values(i0, j0) * (1 - ti) * (1 - tj) + f.values(i0 + 1, j0) * ti * (1 - tj) +
           f.values(i0, j0 + 1) * (1 - ti) * tj + f.values(i0 + 1, j0 + 1) * ti * tj;
  };

  // Integrate along the orthogonal quadrature over the grid diagonal.
  double reach = std::hypot(g.x_max - g.x_min, g.p_max - g.p_min) / 2.0;
  int usteps = 2 * n;
  double du = 2.0 * reach / usteps;

  Marginal m;
  m.quadrature.reserve(static_cast<size_t>(n));
  m.density.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sq = g.x_min + (g.x_max - g.x_min) * i / (n - 1);
    double acc = 0.0;
    for (int k = 0; k <= usteps; ++k) {
      double u = -reach + k * du;
      double x = sq * c - u * s;
      double p = sq * s + u * c;
      double v = sample(x, p);
      acc += (k == 0 || k == usteps) ? 0.5 * v : v;
    }
    m.quadrature.push_back(sq);
    m.density.push_back(acc * du);
  }
  return m;
}

namespace {

// Squeezed-vacuum Fock tail for the truncation check:
// p_{2k} = (2k)! / (2^k k!)^2 tanh^{2k} r / cosh r.
double squeezed_tail(double r, int dim) {
  double captured = 0.0;
  double term = 1.0 / std::cosh(r);
  double t2 = std::tanh(r) * std::tanh(r);
  for (int k = 0; 2 * k < dim; ++k) {
    captured += term;
    // p_{2(k+1)} / p_{2k} = tanh^2 r (2k+1)/(2k+2)
    term *= t2 * (2.0 * k + 1.0) / (2.0 * k + 2.0);
  }
  return std::max(0.0, 1.0 - captured);
}

}  // namespace

Operator squeeze_operator(const SqueezeParams& params, int dim) {
  if (dim < 2) throw Error(ErrorKind::invalid_dimension, "phasespace", "dim must be >= 2");
  if (params.r < 0.0) throw Error(ErrorKind::invalid_argument, "phasespace", "r must be >= 0");
  if (squeezed_tail(params.r, dim) > 1e-8)
    throw Error(ErrorKind::leakage, "phasespace", "squeezed-vacuum tail exceeds truncation tolerance");
  auto [a, ad] = ladder_operators(dim);
  // Generator sign fixed so the minimum-variance quadrature sits at
  // phi = (theta + pi)/2, consistent with squeezed_vacuum_variance.
  Complex zeta = params.r * std::exp(Complex(0.0, params.theta));
  Matrix gen = 0.5 * (zeta * (ad.matrix() * ad.matrix()) -
                      std::conj(zeta) * (a.matrix() * a.matrix()));
  Matrix u = hermitian_propagator(Complex(0.0, 1.0) * gen, 1.0);
  return Operator(HilbertSpace({dim}), std::move(u));
}

double squeezed_vacuum_variance(const SqueezeParams& params, double phi) {
  // phi~ measured from the squeezed axis at (theta + pi)/2.
  double pt = phi - (params.theta + pi) / 2.0;
  double s = std::sin(pt), c = std::cos(pt);
  return 0.5 * (std::exp(2.0 * params.r) * s * s + std::exp(-2.0 * params.r) * c * c);
}

double squeezing_level_db(const SqueezeParams& params, double phi) {
  return 10.0 * std::log10(squeezed_vacuum_variance(params, phi) / 0.5);
}

Operator two_mode_squeeze_operator(const SqueezeParams& params, int dim1, int dim2) {
  if (dim1 < 2 || dim2 < 2)
    throw Error(ErrorKind::invalid_dimension, "phasespace", "dims must be >= 2");
  // Reduced state of the two-mode squeezed vacuum is thermal with
  // populations tanh^{2n} r / cosh^2 r; check the smaller truncation.
  double t2 = std::tanh(params.r) * std::tanh(params.r);
  int dmin = std::min(dim1, dim2);
  double tail = std::pow(t2, dmin);  // geometric series remainder
  if (tail > 1e-8)
    throw Error(ErrorKind::leakage, "phasespace", "two-mode squeezed tail exceeds truncation tolerance");

  HilbertSpace space({dim1, dim2});
  auto [a1, a1d] = ladder_operators(dim1);
  auto [a2, a2d] = ladder_operators(dim2);
  Matrix aa = (embed(a1, 0, space) * embed(a2, 1, space)).matrix();
  Complex zeta = params.r * std::exp(Complex(0.0, params.theta));
  Matrix gen = zeta * aa.adjoint() - std::conj(zeta) * aa;
  Matrix u = hermitian_propagator(Complex(0.0, 1.0) * gen, 1.0);
  return Operator(space, std::move(u));
}

JPAEffective jpa_effective(const JPAParams& params) {
  JPAEffective out;
  double delta0 = params.omega_0 - params.omega_p;
  double hk2 = params.kappa * params.kappa / 4.0;
  if (params.epsilon_p == 0.0) {
    out.delta = delta0;
    out.below_threshold = true;
    out.all_photon_solutions = {0.0};
    return out;
  }
  std::vector<double> roots;
  if (params.K == 0.0) {
    roots.push_back(params.epsilon_p * params.epsilon_p / (delta0 * delta0 + hk2));
  } else {
    // n [(delta0 + K n)^2 + (kappa/2)^2] = eps_p^2, cubic in n.
    double k2 = params.K * params.K;
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    double c2 = 2.0 * delta0 * params.K / k2;
    double c1 = (delta0 * delta0 + hk2) / k2;
    double c0 = -params.epsilon_p * params.epsilon_p / k2;
    companion(0, 2) = -c0;
    companion(1, 2) = -c1;
    companion(2, 2) = -c2;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion);
    for (int k = 0; k < 3; ++k) {
      Complex r = es.eigenvalues()(k);
      if (std::abs(r.imag()) < 1e-9 * std::max(1.0, std::abs(r.real())) && r.real() > 0.0)
        roots.push_back(r.real());
    }
    std::sort(roots.begin(), roots.end());
    // Deduplicate nearly equal roots from the solver.
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12 * (1.0 + a); }),
                roots.end());
  }
  if (roots.empty())
    throw Error(ErrorKind::convergence, "phasespace", "no real JPA working point found");
  out.bistable = roots.size() > 1;
  out.all_photon_solutions = roots;
  double n = roots.front();  // low-amplitude branch
  Complex denom(delta0 + params.K * n, -params.kappa / 2.0);
  out.alpha = -params.epsilon_p / denom;
  out.delta = delta0 + 2.0 * params.K * n;
  out.epsilon_2 = out.alpha * out.alpha * params.K;
  out.below_threshold =
      std::abs(out.epsilon_2) < std::sqrt(out.delta * out.delta + hk2);
  return out;
}

}  // namespace cqed
