#include "cqed/codes.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cqed {

void CodeSpec::validate() const {
  if (codewords.size() < 2) throw Error(ErrorKind::invalid_argument, "codes", "need at least two codewords");
  for (size_t i = 0; i < codewords.size(); ++i) {
    if (codewords[i].size() != space.total_dim())
      throw Error(ErrorKind::invalid_dimension, "codes", "codeword length mismatch");
    for (size_t j = 0; j <= i; ++j) {
      Complex ov = codewords[j].dot(codewords[i]);
      double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(ov - expect) > 1e-10)
        throw Error(ErrorKind::invalid_state, "codes", "codewords are not orthonormal");
    }
  }
  for (const auto& s : stabilizers) {
    Matrix sq = s * s;
    if ((sq - Matrix::Identity(sq.rows(), sq.cols())).cwiseAbs().maxCoeff() > 1e-10)
      throw Error(ErrorKind::invalid_argument, "codes", "stabilizer does not square to identity");
    for (const auto& w : codewords)
      if ((s * w - w).norm() > 1e-10)
        throw Error(ErrorKind::invalid_argument, "codes", "stabilizer does not fix a codeword");
  }
}

Matrix CodeSpec::projector() const {
  Matrix p = Matrix::Zero(space.total_dim(), space.total_dim());
  for (const auto& w : codewords) p += w * w.adjoint();
  return p;
}

CodeSpec binomial_code(int dim) {
  if (dim < 5) throw Error(ErrorKind::invalid_dimension, "codes", "binomial code needs dim >= 5");
  CodeSpec code;
  code.name = "binomial";
  code.space = HilbertSpace({dim});
  Vector w0 = Vector::Zero(dim), w1 = Vector::Zero(dim);
  w0(0) = 1.0 / std::sqrt(2.0);
  w0(4) = 1.0 / std::sqrt(2.0);
  w1(2) = 1.0;
  code.codewords = {w0, w1};
  code.stabilizers = {parity_operator(dim).matrix()};
  auto [a, ad] = ladder_operators(dim);
  code.error_set = {Matrix::Identity(dim, dim), a.matrix()};
  code.validate();
  return code;
}

CodeSpec cat_code(double alpha, int legs, int dim) {
  if (legs != 2 && legs != 4)
    throw Error(ErrorKind::invalid_argument, "codes", "cat code supports 2 or 4 legs");
  if (dim < 4) throw Error(ErrorKind::invalid_dimension, "codes", "dim too small for a cat code");
  // Tail check on the underlying coherent states.
  double n2 = alpha * alpha;
  double captured = 0.0, p = std::exp(-n2);
  for (int n = 0; n < dim; ++n) {
    captured += p;
    p *= n2 / (n + 1);
  }
  if (1.0 - captured > 1e-10)
    throw Error(ErrorKind::leakage, "codes", "coherent tail exceeds the truncation tolerance");

  auto coherent = [&](Complex a) {
    Vector v(dim);
    Complex c = std::exp(-0.5 * std::norm(a));
    for (int n = 0; n < dim; ++n) {
      v(n) = c;
      c *= a / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
  };

  CodeSpec code;
  code.space = HilbertSpace({dim});
  auto [a_op, ad_op] = ladder_operators(dim);
  if (legs == 2) {
    code.name = "cat-2";
    Vector plus = coherent(alpha) + coherent(-alpha);
    Vector minus = coherent(alpha) - coherent(-alpha);
    plus /= plus.norm();
    minus /= minus.norm();
    code.codewords = {plus, minus};  // X-basis convention
    code.error_set = {Matrix::Identity(dim, dim), a_op.matrix()};
  } else {
    code.name = "cat-4";
    Complex i(0.0, 1.0);
    Vector w0 = coherent(alpha) + coherent(i * alpha) + coherent(-alpha) + coherent(-i * alpha);
    Vector w1 = coherent(alpha) - coherent(i * alpha) + coherent(-alpha) - coherent(-i * alpha);
    w0 /= w0.norm();
    w1 /= w1.norm();
    code.codewords = {w0, w1};
    code.stabilizers = {parity_operator(dim).matrix()};
    code.error_set = {Matrix::Identity(dim, dim), a_op.matrix()};
  }
  code.validate();
  return code;
}

namespace {

Matrix pauli_on(const HilbertSpace& space, int qubit, const Matrix& p) {
  return embed(Operator(HilbertSpace({2}), p), qubit, space).matrix();
}

}  // namespace

CodeSpec four_qubit_code() {
  CodeSpec code;
  code.name = "four-qubit";
  code.space = HilbertSpace({2, 2, 2, 2});
  const int dim = 16;
  auto basis = [&](int b3, int b2, int b1, int b0) {
    Vector v = Vector::Zero(dim);
    v(b3 * 8 + b2 * 4 + b1 * 2 + b0) = 1.0;
    return v;
  };
  Vector w0 = (basis(0, 0, 0, 0) + basis(1, 1, 1, 1)) / std::sqrt(2.0);
  Vector w1 = (basis(1, 1, 0, 0) + basis(0, 0, 1, 1)) / std::sqrt(2.0);
  code.codewords = {w0, w1};

  Matrix z(2, 2), x(2, 2), sm(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;  // +1 on |0>
  x << 0.0, 1.0, 1.0, 0.0;
  sm << 0.0, 1.0, 0.0, 0.0;  // |0><1|
  code.stabilizers = {pauli_on(code.space, 0, z) * pauli_on(code.space, 1, z),
                      pauli_on(code.space, 2, z) * pauli_on(code.space, 3, z),
                      pauli_on(code.space, 0, x) * pauli_on(code.space, 1, x) *
                          pauli_on(code.space, 2, x) * pauli_on(code.space, 3, x)};
  code.error_set = {Matrix::Identity(dim, dim)};
  for (int q = 0; q < 4; ++q) code.error_set.push_back(pauli_on(code.space, q, sm));
  code.validate();
  return code;
}

LossChannel amplitude_damping_kraus(double kappa_t, int dim) {
  if (kappa_t < 0.0 || kappa_t >= 1.0e2)
    throw Error(ErrorKind::invalid_argument, "codes", "kappa_t out of range");
  double gamma = 1.0 - std::exp(-kappa_t);
  if (gamma >= 1.0) throw Error(ErrorKind::invalid_argument, "codes", "loss probability reached 1");
  LossChannel ch;
  ch.kappa_t = kappa_t;
  if (kappa_t == 0.0) {
    ch.kraus = {Matrix::Identity(dim, dim)};
    return ch;
  }
  // K_l |n> = sqrt(C(n,l) gamma^l (1-gamma)^(n-l)) |n-l>
  for (int l = 0; l < dim; ++l) {
    Matrix k = Matrix::Zero(dim, dim);
    for (int n = l; n < dim; ++n) {
      double log_binom = std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
      double amp = std::exp(0.5 * (log_binom + l * std::log(gamma) + (n - l) * std::log1p(-gamma)));
      k(n - l, n) = amp;
    }
    ch.kraus.push_back(std::move(k));
  }
  return ch;
}

LossChannel four_qubit_damping(double gamma_t) {
  if (gamma_t < 0.0) throw Error(ErrorKind::invalid_argument, "codes", "gamma_t must be >= 0");
  double gamma = 1.0 - std::exp(-gamma_t);
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  LossChannel ch;
  ch.kappa_t = gamma_t;
  std::vector<Matrix> singles = {k0, k1};
  std::vector<Matrix> acc = {Matrix::Identity(1, 1)};
  for (int q = 0; q < 4; ++q) {
    std::vector<Matrix> next;
    for (const auto& left : acc)
      for (const auto& s : singles) {
        Matrix out(left.rows() * 2, left.cols() * 2);
        for (Eigen::Index i = 0; i < left.rows(); ++i)
          for (Eigen::Index j = 0; j < left.cols(); ++j)
            out.block(i * 2, j * 2, 2, 2) = left(i, j) * s;
        next.push_back(std::move(out));
      }
    acc = std::move(next);
  }
  ch.kraus = std::move(acc);
  return ch;
}

KnillLaflammeReport knill_laflamme_check(const CodeSpec& code, const std::vector<Matrix>& errors) {
  if (errors.empty()) throw Error(ErrorKind::invalid_argument, "codes", "empty error set");
  const Vector& w0 = code.codewords[0];
  const Vector& w1 = code.codewords[1];
  KnillLaflammeReport rep;
  for (const auto& ea : errors)
    for (const auto& eb : errors) {
      Matrix m = ea.adjoint() * eb;
      Complex off = w0.dot(m * w1);
      Complex d0 = w0.dot(m * w0);
      Complex d1 = w1.dot(m * w1);
      rep.max_offdiagonal = std::max(rep.max_offdiagonal, std::abs(off));
      rep.max_asymmetry = std::max(rep.max_asymmetry, 0.5 * std::abs(d0 - d1));
    }
  rep.satisfied_exactly = rep.residual() < 1e-10;
  return rep;
}

namespace {

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    if (y[k] <= 0.0) continue;
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::convergence, "codes", "too few points for a scaling fit");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

KlScalingReport kl_scaling(const CodeSpec& code,
                           const std::function<std::vector<Matrix>(double)>& channel,
                           const std::vector<double>& kappa_t_grid) {
  KlScalingReport rep;
  for (double kt : kappa_t_grid)
    rep.residuals.push_back(knill_laflamme_check(code, channel(kt)).residual());
  double max_res = *std::max_element(rep.residuals.begin(), rep.residuals.end());
  if (max_res < 1e-10) {
    rep.verdict = KlOrder::exact;
    rep.exponent = 0.0;
    return rep;
  }
  rep.exponent = fit_loglog_slope(kappa_t_grid, rep.residuals);
  rep.verdict = (rep.exponent > 1.5) ? KlOrder::first_order : KlOrder::violated;
  return rep;
}

std::vector<Matrix> petz_recovery(const CodeSpec& code, const std::vector<Matrix>& kraus) {
  Matrix p = code.projector();
  const Eigen::Index d = p.rows();
  Matrix np = Matrix::Zero(d, d);
  for (const auto& k : kraus) np += k * p * k.adjoint();
  // Pseudo-inverse square root on the support of N(P).
  Eigen::SelfAdjointEigenSolver<Matrix> es(np);
  double cutoff = 1e-13 * std::max(1.0, es.eigenvalues().maxCoeff());
  Vector inv_sqrt(d);
  for (Eigen::Index k = 0; k < d; ++k)
    inv_sqrt(k) = (es.eigenvalues()(k) > cutoff) ? 1.0 / std::sqrt(es.eigenvalues()(k)) : 0.0;
  Matrix s = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();

  std::vector<Matrix> recovery;
  Matrix total = Matrix::Zero(d, d);
  for (const auto& k : kraus) {
    Matrix r = p * k.adjoint() * s;
    total += r.adjoint() * r;
    recovery.push_back(std::move(r));
  }
  // Complete the instrument on the orthocomplement.
  Matrix rem = Matrix::Identity(d, d) - total;
  Eigen::SelfAdjointEigenSolver<Matrix> er(0.5 * (rem + rem.adjoint()));
  Vector root = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  recovery.push_back(er.eigenvectors() * root.asDiagonal() * er.eigenvectors().adjoint());
  return recovery;
}

namespace {

// Entanglement fidelity of the channel with Kraus set M on the maximally
// mixed code state: sum_m |Tr(P M_m)/2|^2.
double entanglement_fidelity(const Matrix& p, const std::vector<Matrix>& kraus_set) {
  double f = 0.0;
  for (const auto& m : kraus_set) f += std::norm((p * m).trace() / 2.0);
  return f;
}

}  // namespace

RecoveryBenchmark recovery_benchmark(const CodeSpec& code,
                                     const std::function<std::vector<Matrix>(double)>& channel,
                                     const std::vector<double>& kappa_t_grid) {
  RecoveryBenchmark bench;
  bench.kappa_t = kappa_t_grid;
  Matrix p = code.projector();
  for (double kt : kappa_t_grid) {
    std::vector<Matrix> kraus = channel(kt);
    double f_bare = entanglement_fidelity(p, kraus);

    std::vector<Matrix> recovery = petz_recovery(code, kraus);
    std::vector<Matrix> composed;
    composed.reserve(recovery.size() * kraus.size());
    for (const auto& r : recovery)
      for (const auto& k : kraus) composed.push_back(r * k);
    double f_rec = entanglement_fidelity(p, composed);

    bench.infidelity_bare.push_back(std::max(0.0, 1.0 - f_bare));
    bench.infidelity_recovered.push_back(std::max(0.0, 1.0 - f_rec));
  }
  bench.exponent_bare = fit_loglog_slope(bench.kappa_t, bench.infidelity_bare);
  bench.exponent_recovered = fit_loglog_slope(bench.kappa_t, bench.infidelity_recovered);
  return bench;
}

}  // namespace cqed
