#include "cqed/gates.hpp"

#include <cmath>

#include "cqed/dynamics.hpp"

namespace cqed {

Complex DriveEnvelope::value(double t, double EC_angular) const {
  if (t < 0.0 || t > duration) return 0.0;
  switch (shape) {
    case PulseShape::square:
      return amplitude;
    case PulseShape::gaussian:
    case PulseShape::gaussian_drag: {
      double s = (sigma > 0.0) ? sigma : duration / 4.0;
      double tc = duration / 2.0;
      double edge = std::exp(-tc * tc / (2.0 * s * s));
      double norm = 1.0 - edge;
      double gauss = std::exp(-(t - tc) * (t - tc) / (2.0 * s * s));
      double in_phase = amplitude * (gauss - edge) / norm;
      if (shape == PulseShape::gaussian) return in_phase;
      double derivative = amplitude * (-(t - tc) / (s * s)) * gauss / norm;
      double quad = (EC_angular > 0.0) ? drag_coefficient * derivative / EC_angular : 0.0;
      return Complex(in_phase, quad);
    }
    case PulseShape::custom:
      return custom ? custom(t) : Complex(0.0, 0.0);
  }
  return 0.0;
}

double DriveEnvelope::pulse_area(double EC_angular) const {
  const int n = 4000;
  double dt = duration / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    double w = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += w * value(k * dt, EC_angular).real();
  }
  return acc * dt;
}

DriveEnvelope drag_envelope(double amplitude, double duration, double sigma, double coefficient) {
  DriveEnvelope e;
  e.shape = PulseShape::gaussian_drag;
  e.amplitude = amplitude;
  e.duration = duration;
  e.sigma = sigma;
  e.drag_coefficient = coefficient;
  return e;
}

double average_gate_fidelity(const Matrix& u, const Matrix& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols())
    throw Error(ErrorKind::invalid_dimension, "gates", "fidelity operands differ in size");
  double d = static_cast<double>(u.rows());
  Complex tr = (target.adjoint() * u).trace();
  return (std::norm(tr) + d) / (d * (d + 1.0));
}

Matrix propagate_schrodinger(
    const Matrix& h0,
    const std::vector<std::pair<Matrix, std::function<Complex(double)>>>& drives, double t0,
    double t1, int steps) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "gates", "steps must be >= 1");
  const Eigen::Index d = h0.rows();
  auto h_at = [&](double t) {
    Matrix h = h0;
    for (const auto& [op, coef] : drives) {
      Complex c = coef(t);
      h += c * op + std::conj(c) * op.adjoint();
    }
    return h;
  };
  Matrix u = Matrix::Identity(d, d);
  double dt = (t1 - t0) / steps;
  const Complex mi(0.0, -1.0);
  for (int k = 0; k < steps; ++k) {
    double t = t0 + k * dt;
    Matrix k1 = mi * (h_at(t) * u);
    Matrix k2 = mi * (h_at(t + dt / 2) * (u + dt / 2 * k1));
    Matrix k3 = mi * (h_at(t + dt / 2) * (u + dt / 2 * k2));
    Matrix k4 = mi * (h_at(t + dt) * (u + dt * k3));
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

GateResult single_qubit_gate(const DriveEnvelope& envelope, int transmon_dim, double EC,
                             const Matrix& target, double gamma1, double gamma_phi) {
  if (transmon_dim < 2)
    throw Error(ErrorKind::invalid_dimension, "gates", "transmon_dim must be >= 2");
  if (target.rows() != 2 || target.cols() != 2)
    throw Error(ErrorKind::invalid_dimension, "gates", "single-qubit target must be 2x2");
  double ec_ang = two_pi * EC;
  // Bandwidth sanity: a pulse much shorter than 1/anharmonicity cannot stay
  // in the computational subspace.
  if (transmon_dim > 2 && envelope.duration > 0.0 && ec_ang > 0.0 &&
      1.0 / envelope.duration > 20.0 * ec_ang)
    throw Error(ErrorKind::invalid_argument, "gates", "pulse bandwidth far beyond the anharmonicity");

  HilbertSpace space({transmon_dim});
  auto [b, bd] = ladder_operators(transmon_dim);
  Matrix h0 = Matrix::Zero(transmon_dim, transmon_dim);
  for (int n = 0; n < transmon_dim; ++n)
    h0(n, n) = envelope.detuning * n - 0.5 * ec_ang * n * (n - 1);

  Complex carrier = std::exp(Complex(0.0, -envelope.phase));
  auto coef = [&, carrier](double t) { return envelope.value(t, ec_ang) * carrier; };

  double rate_scale = std::max({std::abs(envelope.detuning), ec_ang, envelope.amplitude, 1.0});
  int steps = std::max(2000, static_cast<int>(envelope.duration * rate_scale * 40.0));

  GateResult r;
  if (gamma1 == 0.0 && gamma_phi == 0.0) {
    Matrix u = propagate_schrodinger(h0, {{bd.matrix(), coef}}, 0.0, envelope.duration, steps);
    r.unitary = u.topLeftCorner(2, 2);
    r.leakage = 1.0 - (r.unitary.adjoint() * r.unitary).trace().real() / 2.0;
    r.fidelity = average_gate_fidelity(r.unitary, target);
    return r;
  }

  // Dissipative case: reconstruct the channel on the qubit subspace from
  // four Hermitian preparations and report the average channel fidelity.
  LindbladModel model{Operator(space, h0, true), {}, {}};
  if (gamma1 > 0.0) model.collapse.push_back({gamma1, Operator(space, b.matrix())});
  if (gamma_phi > 0.0)
    model.collapse.push_back({2.0 * gamma_phi, Operator(space, (bd * b).matrix())});
  model.drives.push_back({Operator(space, bd.matrix()), coef});

  std::vector<double> grid{0.0, envelope.duration};
  EvolveOptions opt;
  opt.store_states = true;
  auto run = [&](const Vector& psi) {
    Matrix rho0 = psi * psi.adjoint();
    auto res = evolve(model, QuantumState::density(space, rho0), grid, {}, opt);
    return res.states.back();
  };
  Vector k0 = Vector::Zero(transmon_dim), k1 = Vector::Zero(transmon_dim);
  k0(0) = 1.0;
  k1(1) = 1.0;
  Vector kp = (k0 + k1) / std::sqrt(2.0);
  Vector ki = (k0 + Complex(0.0, 1.0) * k1) / std::sqrt(2.0);
  Matrix e00 = run(k0), e11 = run(k1), epp = run(kp), eii = run(ki);
  // |0><1| = [(2 P+ - P0 - P1) + i (2 P+i - P0 - P1)] / 2
  Matrix e01 = 0.5 * ((2.0 * epp - e00 - e11) + Complex(0.0, 1.0) * (2.0 * eii - e00 - e11));
  Matrix e10 = e01.adjoint();

  auto vfull = [&](int col) {
    Vector v = Vector::Zero(transmon_dim);
    v.head(2) = target.col(col);
    return v;
  };
  auto block = [&](const Matrix& e, int i, int j) { return vfull(i).dot(e * vfull(j)); };
  Complex fpro = 0.25 * (block(e00, 0, 0) + block(e01, 0, 1) + block(e10, 1, 0) + block(e11, 1, 1));
  r.fidelity = (2.0 * fpro.real() + 1.0) / 3.0;
  r.leakage =
      1.0 - 0.5 * (e00.topLeftCorner(2, 2).trace().real() + e11.topLeftCorner(2, 2).trace().real());
  // The channel is not unitary; no subspace propagator is reported here.
  return r;
}

AcStarkPhase ac_stark_z(double OmegaR, double delta_q, double EC, double duration) {
  if (delta_q == 0.0) throw Error(ErrorKind::resonance, "gates", "ac-Stark Z needs a detuned drive");
  AcStarkPhase out;
  out.warning = std::abs(OmegaR / delta_q) > 0.3;
  // The drive lowers the qubit frequency by (EC/2hbar)(OmegaR/delta_q)^2;
  // the reported value is the phase accumulated by rho_01, i.e. minus the
  // frequency shift times the duration.
  double ec_ang = two_pi * EC;
  out.phase = 0.5 * ec_ang * (OmegaR * OmegaR) / (delta_q * delta_q) * duration;
  return out;
}

double exchange_J(double EC1, double EC2, double ECc, double EJ1, double EJ2) {
  if (EC1 <= 0.0 || EC2 <= 0.0 || ECc <= 0.0 || EJ1 <= 0.0 || EJ2 <= 0.0)
    throw Error(ErrorKind::invalid_argument, "gates", "energies must be positive");
  return two_pi * (2.0 * EC1 * EC2 / ECc) *
         std::pow((EJ1 / (2.0 * EC1)) * (EJ2 / (2.0 * EC2)), 0.25);
}

Matrix sqrt_iswap_target() {
  Matrix u = Matrix::Identity(4, 4);
  double s = 1.0 / std::sqrt(2.0);
  u(1, 1) = s;
  u(2, 2) = s;
  u(1, 2) = Complex(0.0, -s);
  u(2, 1) = Complex(0.0, -s);
  return u;
}

Matrix iswap_target() {
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = 0.0;
  u(2, 2) = 0.0;
  u(1, 2) = Complex(0.0, -1.0);
  u(2, 1) = Complex(0.0, -1.0);
  return u;
}

GateResult iswap_gate(double J, double t) {
  if (J <= 0.0) throw Error(ErrorKind::invalid_argument, "gates", "J must be positive");
  GateResult r;
  r.unitary = Matrix::Identity(4, 4);
  double c = std::cos(J * t), s = std::sin(J * t);
  r.unitary(1, 1) = c;
  r.unitary(2, 2) = c;
  r.unitary(1, 2) = Complex(0.0, -s);
  r.unitary(2, 1) = Complex(0.0, -s);
  r.leakage = 0.0;
  r.fidelity = average_gate_fidelity(r.unitary, sqrt_iswap_target());
  return r;
}

double exchange_off_state_zz(double J, double Delta12) {
  if (Delta12 == 0.0) throw Error(ErrorKind::resonance, "gates", "off-state ZZ needs detuned qubits");
  return J * J / Delta12;
}

double mediated_J(double g1, double g2, double Delta1, double Delta2) {
  if (Delta1 == 0.0 || Delta2 == 0.0)
    throw Error(ErrorKind::resonance, "gates", "mediated J undefined at qubit-resonator resonance");
  return 0.5 * g1 * g2 * (1.0 / Delta1 + 1.0 / Delta2);
}

namespace {

// Basis {00, 01, 10, 11, 02}; the J coupling links 11 and 02 with sqrt(2) J.
Matrix cz_model_h(double J, double delta_1102) {
  Matrix h = Matrix::Zero(5, 5);
  h(4, 4) = delta_1102;  // E02 - E11 in the frame where bare phases drop
  double c = std::sqrt(2.0) * J;
  h(3, 4) = c;
  h(4, 3) = c;
  return h;
}

}  // namespace

GateResult cz_11_02(double J, const CzProtocol& protocol) {
  if (J <= 0.0) throw Error(ErrorKind::invalid_argument, "gates", "J must be positive");
  Matrix u5;
  if (protocol.sudden) {
    double zeta = 2.0 * std::sqrt(2.0) * J;  // 11-02 splitting at resonance
    double dwell = two_pi / zeta;            // h / zeta
    u5 = hermitian_propagator(cz_model_h(J, 0.0), dwell);
  } else {
    if (protocol.duration <= 0.0 || protocol.delta_max == 0.0)
      throw Error(ErrorKind::invalid_argument, "gates", "adiabatic protocol needs duration and delta_max");
    double T = protocol.duration;
    auto delta_path = [&](double t) {
      double s = std::sin(pi * t / T);
      return protocol.delta_max * (1.0 - s * s * s * s);
    };
    auto coef = [&](double t) { return Complex(0.5 * delta_path(t), 0.0); };
    Matrix h0 = cz_model_h(J, 0.0);
    Matrix mod = Matrix::Zero(5, 5);
    mod(4, 4) = 1.0;  // detuning enters on |02>
    int steps = std::max(4000, static_cast<int>(T * (std::abs(protocol.delta_max) + 4.0 * J) * 30.0));
    u5 = propagate_schrodinger(h0, {{mod, coef}}, 0.0, T, steps);
  }

  GateResult r;
  r.unitary = u5.topLeftCorner(4, 4);
  r.leakage = std::norm(u5(4, 3));  // population left in |02> from |11>
  if (!protocol.sudden && r.leakage > protocol.leakage_threshold)
    throw Error(ErrorKind::leakage, "gates",
                "diabatic leakage " + std::to_string(r.leakage) + " above threshold");

  double p01 = std::arg(u5(1, 1));
  double p10 = std::arg(u5(2, 2));
  double p11 = std::arg(u5(3, 3));
  r.phase_table = {p01, p10, p11};
  r.conditional_phase = p11 - p01 - p10;
  // Factor out single-qubit Z's and compare to CPHASE(conditional phase).
  Matrix corrected = r.unitary;
  Vector z(4);
  z << 1.0, std::exp(Complex(0.0, -p01)), std::exp(Complex(0.0, -p10)),
      std::exp(Complex(0.0, -p01 - p10));
  corrected = z.asDiagonal() * corrected;
  Matrix target = Matrix::Identity(4, 4);
  target(3, 3) = std::exp(Complex(0.0, r.conditional_phase));
  r.fidelity = average_gate_fidelity(corrected, target);
  return r;
}

CrossResonanceCoefficients cross_resonance_effective(double J, double Delta12, double EC1, double EC2,
                                                     double epsilon) {
  if (Delta12 == 0.0) throw Error(ErrorKind::resonance, "gates", "CR needs detuned qubits");
  double ec1 = two_pi * EC1, ec2 = two_pi * EC2;
  if (std::abs(Delta12 - ec1) < 1e-6 * std::max(std::abs(Delta12), ec1))
    throw Error(ErrorKind::resonance, "gates", "Delta12 at the EC1/hbar pole");
  if (std::abs(Delta12 + ec2) < 1e-6 * std::max(std::abs(Delta12), std::abs(ec2)))
    throw Error(ErrorKind::resonance, "gates", "Delta12 at the -EC2/hbar pole");
  CrossResonanceCoefficients c;
  c.chi12 = J * J / (Delta12 + ec2) - J * J / (Delta12 - ec1);
  c.Jprime = J / (Delta12 - ec1);
  c.x1 = epsilon;
  c.x2 = -epsilon * c.Jprime;
  c.zx = -epsilon * ec1 * c.Jprime / Delta12;
  c.zz = c.chi12 / 2.0;
  return c;
}

RipResult rip_zz_rate(double chi1, double chi2, const std::vector<double>& times,
                      const std::vector<Complex>& alpha, double delta_r, double kappa) {
  if (delta_r == 0.0) throw Error(ErrorKind::resonance, "gates", "RIP rate undefined at delta_r = 0");
  if (times.size() != alpha.size() || times.empty())
    throw Error(ErrorKind::invalid_argument, "gates", "trajectory arrays mismatch");
  RipResult out;
  out.warning = (kappa > 0.0 && std::abs(delta_r) < 10.0 * kappa);
  out.rate.reserve(times.size());
  for (const auto& a : alpha)
    out.rate.push_back(-2.0 * chi1 * chi2 * std::norm(a) / delta_r);
  for (size_t k = 1; k < times.size(); ++k)
    out.phase += 0.5 * (out.rate[k - 1] + out.rate[k]) * (times[k] - times[k - 1]);
  return out;
}

SidebandCoupling parametric_sideband(double J, double epsilon_mod, double omega_mod, double Delta12) {
  if (omega_mod <= 0.0)
    throw Error(ErrorKind::invalid_argument, "gates", "modulation frequency must be positive");
  SidebandCoupling s;
  s.n = static_cast<int>(std::lround(Delta12 / omega_mod));
  s.residual = Delta12 - s.n * omega_mod;
  double z = epsilon_mod / omega_mod;
  s.effective_coupling = J * std::cyl_bessel_j(std::abs(s.n), z);
  return s;
}

}  // namespace cqed
