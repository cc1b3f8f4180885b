#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace cqed {

void LindbladModel::validate() const {
  for (const auto& c : collapse) {
    if (c.rate < 0.0) throw Error(ErrorKind::invalid_argument, "dynamics", "collapse rate must be >= 0");
    if (c.op.space() != hamiltonian.space())
      throw Error(ErrorKind::space_mismatch, "dynamics", "collapse operator on a different space");
  }
  for (const auto& d : drives)
    if (d.op.space() != hamiltonian.space())
      throw Error(ErrorKind::space_mismatch, "dynamics", "drive operator on a different space");
}

Matrix LindbladModel::rhs(const Matrix& rho, double t) const {
  Matrix h = hamiltonian.matrix();
  for (const auto& d : drives) {
    Complex c = d.coefficient(t);
    h += c * d.op.matrix() + std::conj(c) * d.op.matrix().adjoint();
  }
  Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& c : collapse) {
    if (c.rate == 0.0) continue;
    const Matrix& l = c.op.matrix();
    Matrix ldl = l.adjoint() * l;
    out += c.rate * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Matrix dissipator(const Operator& op, const Matrix& rho) {
  if (rho.rows() != op.dim())
    throw Error(ErrorKind::space_mismatch, "dynamics", "dissipator operand dimensions differ");
  const Matrix& l = op.matrix();
  Matrix ldl = l.adjoint() * l;
  return l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

Matrix dissipator(const Operator& op, const QuantumState& rho) {
  if (rho.space() != op.space())
    throw Error(ErrorKind::space_mismatch, "dynamics", "dissipator operand spaces differ");
  return dissipator(op, rho.density_matrix());
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Matrix liouvillian(const LindbladModel& model) {
  model.validate();
  const int d = model.hamiltonian.dim();
  Matrix id = Matrix::Identity(d, d);
  const Matrix& h = model.hamiltonian.matrix();
  // Column-stacking convention: vec(A rho B) = (B^T (x) A) vec(rho).
  Matrix L = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : model.collapse) {
    if (c.rate == 0.0) continue;
    const Matrix& l = c.op.matrix();
    Matrix ldl = l.adjoint() * l;
    L += c.rate * (kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return L;
}

namespace {

// Dormand-Prince 5(4) on the density matrix. Returns true on success.
struct Rk45Stats {
  size_t steps = 0;
};

void rk45_integrate(const LindbladModel& model, Matrix& rho, double t0, double t1,
                    const EvolveOptions& opt, Rk45Stats& stats) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (t1 == t0) return;
  double span = t1 - t0;
  double t = t0;
  double dt = span / 100.0;
  const double min_dt = std::abs(span) * 1e-14;

  Matrix k1 = model.rhs(rho, t);
  while (t < t1) {
    if (t + dt > t1) dt = t1 - t;
    Matrix k2 = model.rhs(rho + dt * a21 * k1, t + c2 * dt);
    Matrix k3 = model.rhs(rho + dt * (a31 * k1 + a32 * k2), t + c3 * dt);
    Matrix k4 = model.rhs(rho + dt * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * dt);
    Matrix k5 = model.rhs(rho + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * dt);
    Matrix k6 = model.rhs(rho + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + dt);
    Matrix next = rho + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Matrix k7 = model.rhs(next, t + dt);
    Matrix err_mat = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double scale = opt.atol + opt.rtol * std::max(rho.cwiseAbs().maxCoeff(), next.cwiseAbs().maxCoeff());
    double err = err_mat.cwiseAbs().maxCoeff() / scale;

    if (err <= 1.0) {
      t += dt;
      rho = std::move(next);
      k1 = std::move(k7);  // FSAL
    }
    double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    dt *= std::clamp(factor, 0.2, 5.0);
    if (dt < min_dt)
      throw Error(ErrorKind::stiffness, "dynamics",
                  "step size underflow; reduce dimensions or rates, or use an implicit method");
    if (++stats.steps > opt.max_steps)
      throw Error(ErrorKind::stiffness, "dynamics", "step budget exhausted");
  }
}

struct EigenPropagator {
  Eigen::ComplexEigenSolver<Matrix> es;
  Eigen::PartialPivLU<Matrix> lu;
  bool ok = false;

  explicit EigenPropagator(const Matrix& L) : es(L) {
    if (es.info() != Eigen::Success) return;
    lu.compute(es.eigenvectors());
    ok = lu.rcond() > 1e-12;
  }

  Vector propagate(const Vector& v0, double t) const {
    Vector coeffs = lu.solve(v0);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      coeffs(k) *= std::exp(es.eigenvalues()(k) * t);
    return es.eigenvectors() * coeffs;
  }
};

void record_leakage(const Matrix& rho, const HilbertSpace& space, double t, double threshold,
                    std::vector<LeakageWarning>& warnings) {
  for (int s = 0; s < space.subsystems(); ++s) {
    if (space.dim(s) < 3) continue;
    double pop = top_level_population(rho, space, s);
    if (pop <= threshold) continue;
    auto it = std::find_if(warnings.begin(), warnings.end(),
                           [s](const LeakageWarning& w) { return w.subsystem == s; });
    if (it == warnings.end())
      warnings.push_back({t, s, pop});
    else
      it->max_population = std::max(it->max_population, pop);
  }
}

}  // namespace

EvolutionResult evolve(const LindbladModel& model, const QuantumState& rho0,
                       const std::vector<double>& time_grid, const std::vector<Operator>& observables,
                       const EvolveOptions& options) {
  model.validate();
  if (rho0.space() != model.hamiltonian.space())
    throw Error(ErrorKind::space_mismatch, "dynamics", "initial state on a different space");
  if (time_grid.empty()) throw Error(ErrorKind::invalid_argument, "dynamics", "empty time grid");
  for (size_t k = 1; k < time_grid.size(); ++k)
    if (time_grid[k] < time_grid[k - 1])
      throw Error(ErrorKind::invalid_argument, "dynamics", "time grid must be non-decreasing");
  for (const auto& ob : observables)
    if (ob.space() != model.hamiltonian.space())
      throw Error(ErrorKind::space_mismatch, "dynamics", "observable on a different space");

  const int d = model.hamiltonian.dim();
  bool use_eigen = false;
  if (!model.time_dependent()) {
    if (options.method == EvolveMethod::eigendecomposition) use_eigen = true;
    if (options.method == EvolveMethod::automatic && d <= options.eig_dim_limit) use_eigen = true;
  } else if (options.method == EvolveMethod::eigendecomposition) {
    throw Error(ErrorKind::invalid_argument, "dynamics",
                "eigendecomposition propagation needs a time-independent model");
  }

  EvolutionResult result;
  result.times = time_grid;
  result.expectations.resize(static_cast<Eigen::Index>(time_grid.size()),
                             static_cast<Eigen::Index>(observables.size()));

  Matrix rho = rho0.density_matrix();
  auto store = [&](size_t idx, const Matrix& r) {
    double tr = r.trace().real();
    if (std::abs(tr - 1.0) > 1e-7)
      throw Error(ErrorKind::convergence, "dynamics", "trace drifted beyond 1e-7 during evolution");
    for (size_t o = 0; o < observables.size(); ++o)
      result.expectations(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(o)) =
          (observables[o].matrix() * r).trace();
    if (options.store_states) result.states.push_back(r);
    record_leakage(r, model.hamiltonian.space(), result.times[idx], options.leakage_threshold,
                   result.leakage_warnings);
  };

  if (use_eigen) {
    EigenPropagator prop(liouvillian(model));
    if (!prop.ok) {
      use_eigen = false;  // defective or ill-conditioned Liouvillian
    } else {
      Vector v0 = Eigen::Map<const Vector>(rho.data(), d * d);
      double t0 = time_grid.front();
      for (size_t k = 0; k < time_grid.size(); ++k) {
        Vector v = prop.propagate(v0, time_grid[k] - t0);
        Matrix rk = Eigen::Map<const Matrix>(v.data(), d, d);
        rk = 0.5 * (rk + rk.adjoint()).eval();
        store(k, rk);
      }
    }
  }
  if (!use_eigen) {
    Rk45Stats stats;
    store(0, rho);
    for (size_t k = 1; k < time_grid.size(); ++k) {
      rk45_integrate(model, rho, time_grid[k - 1], time_grid[k], options, stats);
      rho = 0.5 * (rho + rho.adjoint()).eval();
      store(k, rho);
    }
  }

  // Positivity floor checked at the final point.
  const Matrix& final_rho = options.store_states ? result.states.back() : rho;
  if (!use_eigen || options.store_states) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(final_rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-7)
      throw Error(ErrorKind::convergence, "dynamics", "negative eigenvalue beyond the 1e-7 floor");
  }
  return result;
}

namespace {

using SparseMatrixC = Eigen::SparseMatrix<Complex>;

// Same superoperator as liouvillian(), assembled from the nonzeros of the
// d x d operators; dense storage of L is the bottleneck above d ~ 30.
SparseMatrixC sparse_liouvillian(const LindbladModel& model) {
  const int d = model.hamiltonian.dim();
  std::vector<Eigen::Triplet<Complex>> trip;
  auto add_left = [&](const Matrix& a, Complex scale) {  // vec(A rho)
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        if (a(i, k) == Complex(0.0, 0.0)) continue;
        for (int j = 0; j < d; ++j) trip.emplace_back(j * d + i, j * d + k, scale * a(i, k));
      }
  };
  auto add_right = [&](const Matrix& a, Complex scale) {  // vec(rho A)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        if (a(k, j) == Complex(0.0, 0.0)) continue;
        for (int i = 0; i < d; ++i) trip.emplace_back(j * d + i, k * d + i, scale * a(k, j));
      }
  };
  auto add_sandwich = [&](const Matrix& l, Complex scale) {  // vec(L rho L')
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        if (l(i, k) == Complex(0.0, 0.0)) continue;
        for (int j = 0; j < d; ++j)
          for (int m = 0; m < d; ++m) {
            if (l(j, m) == Complex(0.0, 0.0)) continue;
            trip.emplace_back(j * d + i, m * d + k, scale * l(i, k) * std::conj(l(j, m)));
          }
      }
  };
  const Matrix& h = model.hamiltonian.matrix();
  add_left(h, Complex(0.0, -1.0));
  add_right(h, Complex(0.0, 1.0));
  for (const auto& c : model.collapse) {
    if (c.rate == 0.0) continue;
    const Matrix& l = c.op.matrix();
    Matrix ldl = l.adjoint() * l;
    add_sandwich(l, c.rate);
    add_left(ldl, -0.5 * c.rate);
    add_right(ldl, -0.5 * c.rate);
  }
  SparseMatrixC out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Deterministic probe used by the inverse-power singularity estimate: if
// the Liouvillian kernel has dimension > 1, the trace-constrained system is
// singular and the solve against this probe blows up (or goes non-finite).
Vector certification_probe(int n) {
  Vector r(n);
  uint64_t state = 0x2545f4914f6cdd1dULL;
  for (int k = 0; k < n; ++k) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    double u = (state >> 11) * 0x1.0p-53 - 0.5;
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    double v = (state >> 11) * 0x1.0p-53 - 0.5;
    r(k) = Complex(u, v);
  }
  r /= r.norm();
  return r;
}

Matrix sparse_steady_state(const LindbladModel& model) {
  const int d = model.hamiltonian.dim();
  SparseMatrixC L = sparse_liouvillian(model);
  const int row = 0;
  double lscale = 0.0;
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(L, k); it; ++it)
      lscale = std::max(lscale, std::abs(it.value()));
  lscale = std::max(lscale, 1e-300);

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(L.nonZeros() + d));
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(L, k); it; ++it)
      if (it.row() != row) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < d; ++k) trip.emplace_back(row, k * d + k, Complex(1.0, 0.0));
  SparseMatrixC M(d * d, d * d);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  Eigen::SparseLU<SparseMatrixC> lu(M);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::steady_state_multiplicity, "dynamics",
                "sparse factorization failed; null space may be degenerate");

  Vector probe = lu.solve(certification_probe(d * d));
  double sigma_est = 1.0 / probe.norm();
  if (!(sigma_est > 1e-12 * lscale))
    throw Error(ErrorKind::steady_state_multiplicity, "dynamics",
                "Liouvillian null space is degenerate");

  Vector rhs = Vector::Zero(d * d);
  rhs(row) = 1.0;
  Vector v = lu.solve(rhs);
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  Vector residual = L * Eigen::Map<const Vector>(rho.data(), d * d);
  if (!(residual.cwiseAbs().maxCoeff() <= 1e-10 * lscale))
    throw Error(ErrorKind::steady_state_multiplicity, "dynamics",
                "steady-state residual too large; null space may be degenerate");
  return rho;
}

}  // namespace

QuantumState steady_state(const LindbladModel& model) {
  model.validate();
  if (model.time_dependent())
    throw Error(ErrorKind::invalid_argument, "dynamics", "steady state needs a time-independent model");
  const int d = model.hamiltonian.dim();
  if (d > 30) {
    Matrix rho_sparse = sparse_steady_state(model);
    Eigen::SelfAdjointEigenSolver<Matrix> clip(rho_sparse);
    if (clip.eigenvalues().minCoeff() < -1e-10) {
      RealVector clipped = clip.eigenvalues().cwiseMax(0.0);
      rho_sparse = clip.eigenvectors() * clipped.asDiagonal() * clip.eigenvectors().adjoint();
      rho_sparse /= rho_sparse.trace().real();
    }
    return QuantumState::density(model.hamiltonian.space(), rho_sparse);
  }
  Matrix L = liouvillian(model);
  double lscale = std::max(L.cwiseAbs().maxCoeff(), 1e-300);
  const int row = 0;

  Matrix M = L;
  M.row(row).setZero();
  for (int k = 0; k < d; ++k) M(row, k * d + k) = 1.0;
  Eigen::PartialPivLU<Matrix> lu(M);

  Vector probe = lu.solve(certification_probe(d * d));
  double sigma_est = 1.0 / probe.norm();
  if (!(sigma_est > 1e-12 * lscale))
    throw Error(ErrorKind::steady_state_multiplicity, "dynamics",
                "Liouvillian null space is degenerate or trace-orthogonal");

  Vector rhs = Vector::Zero(d * d);
  rhs(row) = 1.0;
  Vector v = lu.solve(rhs);

  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  Vector residual = L * Eigen::Map<const Vector>(rho.data(), d * d);
  if (!(residual.cwiseAbs().maxCoeff() <= 1e-10 * lscale))
    throw Error(ErrorKind::steady_state_multiplicity, "dynamics",
                "steady-state residual too large; null space may be degenerate");
  // Clip eigenvalue dust so the state passes validation.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    RealVector clipped = es.eigenvalues().cwiseMax(0.0);
    rho = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace().real();
  }
  return QuantumState::density(model.hamiltonian.space(), rho);
}

DissipationRates dispersive_rates(double g, double Delta, double kappa, double gamma,
                                  double gamma_phi) {
  if (Delta == 0.0) throw Error(ErrorKind::resonance, "dynamics", "dispersive rates undefined at Delta = 0");
  DissipationRates r;
  r.kappa = kappa;
  r.gamma = gamma;
  r.gamma_phi = gamma_phi;
  double ratio2 = (g / Delta) * (g / Delta);
  r.dispersive_warning = ratio2 > 0.1;
  r.gamma_Purcell = ratio2 * kappa;
  r.gamma_Purcell_interp = kappa * g * g / ((kappa / 2.0) * (kappa / 2.0) + Delta * Delta);
  r.kappa_inverse_Purcell = ratio2 * gamma;
  r.gamma_Delta = 2.0 * ratio2 * gamma_phi;
  r.gamma1 = gamma + r.gamma_Purcell;
  r.gamma2 = r.gamma1 / 2.0 + gamma_phi;
  r.T1 = (r.gamma1 > 0.0) ? 1.0 / r.gamma1 : 0.0;
  r.T2 = (r.gamma2 > 0.0) ? 1.0 / r.gamma2 : 0.0;
  return r;
}

Complex transmission_amplitude(const TransmissionSpec& s, double omega_d) {
  double delta_r = s.omega_r - omega_d;
  double delta_q = s.omega_q - omega_d;
  double gamma2 = s.gamma1 / 2.0 + s.gamma_phi;
  Complex num(0.0, -1.0);
  Complex qfac(gamma2, delta_q);
  Complex cfac(s.kappa / 2.0, delta_r);
  return num * s.epsilon * qfac / (cfac * qfac + s.g * s.g);
}

namespace {

LindbladModel transmission_model(const TransmissionSpec& s, double omega_d) {
  HilbertSpace space({2, s.resonator_dim});
  auto [b, bd] = ladder_operators(2);
  auto [a, ad] = ladder_operators(s.resonator_dim);
  Operator Sm = embed(b, 0, space), Sp = embed(bd, 0, space);
  Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
  double delta_r = s.omega_r - omega_d;
  double delta_q = s.omega_q - omega_d;
  Matrix h = delta_r * (Ad * A).matrix() + delta_q * (Sp * Sm).matrix() +
             s.g * ((Ad * Sm).matrix() + (A * Sp).matrix()) +
             s.epsilon * ((Ad + A).matrix());
  LindbladModel m{Operator(space, std::move(h), true), {}, {}};
  m.collapse.push_back({s.kappa * (s.n_bar_kappa + 1.0), A});
  if (s.n_bar_kappa > 0.0) m.collapse.push_back({s.kappa * s.n_bar_kappa, Ad});
  if (s.gamma1 > 0.0) m.collapse.push_back({s.gamma1, Sm});
  if (s.gamma_phi > 0.0) m.collapse.push_back({2.0 * s.gamma_phi, Sp * Sm});
  return m;
}

}  // namespace

Spectrum transmission_sweep(const TransmissionSpec& spec, const std::vector<double>& drive_freqs,
                            TransmissionMethod method) {
  if (drive_freqs.empty()) throw Error(ErrorKind::invalid_argument, "dynamics", "empty frequency grid");
  // Weak-drive precondition: the linear-response photon number stays small.
  double max_n = 0.0;
  for (double wd : drive_freqs) max_n = std::max(max_n, std::norm(transmission_amplitude(spec, wd)));
  if (max_n > 0.5)
    throw Error(ErrorKind::invalid_argument, "dynamics",
                "drive too strong for the weak-probe regime (max photon estimate > 0.5)");

  Spectrum out;
  out.omega_d = drive_freqs;
  out.magnitude2.reserve(drive_freqs.size());
  out.phase.reserve(drive_freqs.size());
  for (double wd : drive_freqs) {
    Complex a;
    if (method == TransmissionMethod::three_level_formula) {
      a = transmission_amplitude(spec, wd);
    } else {
      LindbladModel m = transmission_model(spec, wd);
      auto [al, ald] = ladder_operators(spec.resonator_dim);
      Operator A = embed(al, 1, m.hamiltonian.space());
      a = expectation(steady_state(m), A);
    }
    out.magnitude2.push_back(std::norm(a));
    out.phase.push_back(std::arg(a));
  }
  return out;
}

std::vector<double> spectrum_peaks(const Spectrum& s, double prominence_fraction) {
  std::vector<double> peaks;
  if (s.magnitude2.size() < 3) return peaks;
  double top = *std::max_element(s.magnitude2.begin(), s.magnitude2.end());
  double floor = top * prominence_fraction;
  for (size_t k = 1; k + 1 < s.magnitude2.size(); ++k) {
    double y0 = s.magnitude2[k - 1], y1 = s.magnitude2[k], y2 = s.magnitude2[k + 1];
    if (y1 < floor || y1 < y0 || y1 < y2 || (y1 == y0 && y1 == y2)) continue;
    // Quadratic refinement on the three points.
    double denom = y0 - 2.0 * y1 + y2;
    double shift = (denom != 0.0) ? 0.5 * (y0 - y2) / denom : 0.0;
    double dw = s.omega_d[k + 1] - s.omega_d[k];
    peaks.push_back(s.omega_d[k] + shift * dw);
  }
  return peaks;
}

std::vector<double> qubit_lineshape(double OmegaR, double gamma1, double gamma_phi,
                                    const std::vector<double>& detuning_grid, LineshapeMethod method) {
  double gamma2 = gamma1 / 2.0 + gamma_phi;
  std::vector<double> pe;
  pe.reserve(detuning_grid.size());
  if (method == LineshapeMethod::formula) {
    for (double dq : detuning_grid)
      pe.push_back(0.5 * OmegaR * OmegaR /
                   (gamma1 * gamma2 + dq * dq * gamma1 / gamma2 + OmegaR * OmegaR));
    return pe;
  }
  HilbertSpace space({2});
  auto [sm, sp] = ladder_operators(2);
  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = -1.0;
  sz(1, 1) = 1.0;
  Matrix sx = (sm.matrix() + sp.matrix());
  for (double dq : detuning_grid) {
    Matrix h = 0.5 * dq * sz + 0.5 * OmegaR * sx;
    LindbladModel m{Operator(space, std::move(h), true), {}, {}};
    if (gamma1 > 0.0) m.collapse.push_back({gamma1, sm});
    if (gamma_phi > 0.0) m.collapse.push_back({2.0 * gamma_phi, sp * sm});
    Matrix rho = steady_state(m).density_matrix();
    pe.push_back(rho(1, 1).real());
  }
  return pe;
}

double lineshape_fwhm(double OmegaR, double gamma1, double gamma_phi) {
  double gamma2 = gamma1 / 2.0 + gamma_phi;
  double t1 = 1.0 / gamma1, t2 = 1.0 / gamma2;
  return 2.0 * std::sqrt(1.0 / (t2 * t2) + OmegaR * OmegaR * t1 / t2);
}

std::vector<double> two_tone_ac_stark(const AcStarkSpec& spec, const std::vector<double>& detuning_grid) {
  HilbertSpace space({2, spec.resonator_dim});
  auto [b, bd] = ladder_operators(2);
  auto [a, ad] = ladder_operators(spec.resonator_dim);
  Operator Sm = embed(b, 0, space), Sp = embed(bd, 0, space);
  Operator A = embed(a, 1, space), Ad = embed(ad, 1, space);
  Matrix sz = (Sp * Sm).matrix() * 2.0 - Matrix::Identity(space.total_dim(), space.total_dim());
  Matrix num = (Ad * A).matrix();
  Matrix sx = (Sp + Sm).matrix();
  Matrix drive = spec.epsilon * (Ad + A).matrix();

  std::vector<double> pe;
  pe.reserve(detuning_grid.size());
  for (double ds : detuning_grid) {
    // Frame rotating at both tones; ds is measured from the Lamb-shifted
    // qubit frequency omega_q + chi.
    Matrix h = spec.delta_r * num + spec.chi * (num * sz) - 0.5 * ds * sz + drive +
               0.5 * spec.OmegaR * sx;
    LindbladModel m{Operator(space, std::move(h), true), {}, {}};
    if (spec.kappa > 0.0) m.collapse.push_back({spec.kappa, A});
    if (spec.gamma1 > 0.0) m.collapse.push_back({spec.gamma1, Sm});
    if (spec.gamma_phi > 0.0) m.collapse.push_back({2.0 * spec.gamma_phi, Sp * Sm});
    Matrix rho = steady_state(m).density_matrix();
    pe.push_back(((Sp * Sm).matrix() * rho).trace().real());
  }
  return pe;
}

MeasurementDephasing measurement_dephasing_rate(const std::vector<Complex>& alpha_g,
                                                const std::vector<Complex>& alpha_e, double chi,
                                                double kappa, double delta_r) {
  if (alpha_g.size() != alpha_e.size() || alpha_g.empty())
    throw Error(ErrorKind::invalid_argument, "dynamics", "trajectory lengths differ or are empty");
  MeasurementDephasing out;
  out.gamma_m_t.reserve(alpha_g.size());
  for (size_t k = 0; k < alpha_g.size(); ++k)
    out.gamma_m_t.push_back(2.0 * chi * std::imag(alpha_g[k] * std::conj(alpha_e[k])));
  Complex diff = alpha_e.back() - alpha_g.back();
  out.gamma_m_steady = 0.5 * kappa * std::norm(diff);
  double ng = std::norm(alpha_g.back());
  double ne = std::norm(alpha_e.back());
  out.gamma_m_formula =
      kappa * chi * chi * (ng + ne) / (delta_r * delta_r + chi * chi + kappa * kappa / 4.0);
  return out;
}

}  // namespace cqed
