#include "cqed/readout.hpp"

#include <algorithm>
#include <cmath>

namespace cqed {

namespace {

// RK4 on the scalar linear ODE, substepped so coefficient * dt stays small.
std::vector<Complex> integrate_pointer(const DriveFn& eps, Complex decay, const std::vector<double>& grid) {
  std::vector<Complex> alpha(grid.size(), Complex(0.0, 0.0));
  auto f = [&](double t, Complex a) { return Complex(0.0, -1.0) * eps(t) - decay * a; };
  Complex a = 0.0;
  for (size_t k = 1; k < grid.size(); ++k) {
    double t0 = grid[k - 1], t1 = grid[k];
    double span = t1 - t0;
    int sub = 1 + static_cast<int>(std::abs(decay) * span / 0.05);
    double dt = span / sub;
    for (int s = 0; s < sub; ++s) {
      double t = t0 + s * dt;
      Complex k1 = f(t, a);
      Complex k2 = f(t + dt / 2, a + dt / 2 * k1);
      Complex k3 = f(t + dt / 2, a + dt / 2 * k2);
      Complex k4 = f(t + dt, a + dt * k3);
      a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    alpha[k] = a;
  }
  return alpha;
}

}  // namespace

PointerTrajectory pointer_evolution(const DriveFn& epsilon, double delta_r, double chi, double kappa,
                                    const std::vector<double>& time_grid, double gamma1) {
  if (time_grid.size() < 2)
    throw Error(ErrorKind::invalid_argument, "readout", "time grid needs at least two points");
  for (size_t k = 1; k < time_grid.size(); ++k)
    if (time_grid[k] <= time_grid[k - 1])
      throw Error(ErrorKind::invalid_argument, "readout", "time grid must be strictly increasing");

  PointerTrajectory traj;
  traj.times = time_grid;
  traj.delta_r = delta_r;
  traj.chi = chi;
  traj.kappa = kappa;
  traj.alpha_e = integrate_pointer(epsilon, Complex(kappa / 2.0, delta_r + chi), time_grid);
  traj.alpha_g = integrate_pointer(epsilon, Complex(kappa / 2.0, delta_r - chi), time_grid);
  if (gamma1 > 0.0) {
    double t0 = time_grid.front();
    for (size_t k = 0; k < time_grid.size(); ++k) {
      double w = std::exp(-gamma1 * (time_grid[k] - t0));
      traj.alpha_e[k] = w * traj.alpha_e[k] + (1.0 - w) * traj.alpha_g[k];
    }
  }
  return traj;
}

SteadyResponse steady_amplitude_phase(double epsilon, double delta_r, double chi, double kappa) {
  SteadyResponse r;
  double half_kappa = kappa / 2.0;
  r.A_e = 2.0 * epsilon / std::sqrt(half_kappa * half_kappa + (delta_r + chi) * (delta_r + chi));
  r.A_g = 2.0 * epsilon / std::sqrt(half_kappa * half_kappa + (delta_r - chi) * (delta_r - chi));
  r.phi_e = std::atan2(delta_r + chi, half_kappa);
  r.phi_g = std::atan2(delta_r - chi, half_kappa);
  return r;
}

ChainNoise chain_noise(const MeasurementChain& chain) {
  if (chain.stages.empty())
    throw Error(ErrorKind::invalid_argument, "readout", "measurement chain has no stages");
  for (const auto& s : chain.stages) {
    if (s.gain < 1.0)
      throw Error(ErrorKind::invalid_argument, "readout", "amplifying stage gain must be >= 1");
    if (s.added_noise < 0.0)
      throw Error(ErrorKind::invalid_argument, "readout", "added noise must be >= 0");
    if (s.transmissivity <= 0.0 || s.transmissivity > 1.0)
      throw Error(ErrorKind::invalid_argument, "readout", "transmissivity must be in (0,1]");
  }
  // Normal-ordered photon-number cascade: attenuation scales the signal,
  // each amplifier adds (G-1)(N+1) referred to its own input.
  double total_gain = 1.0;
  double added = 0.0;
  for (const auto& s : chain.stages) {
    added *= s.transmissivity;
    total_gain *= s.transmissivity;
    added = s.gain * added + (s.gain - 1.0) * (s.added_noise + 1.0);
    total_gain *= s.gain;
  }
  ChainNoise out;
  out.total_gain = total_gain;
  if (total_gain <= 1.0)
    throw Error(ErrorKind::invalid_argument, "readout", "chain must have net gain > 1");
  out.N_T = added / (total_gain - 1.0) - 1.0;
  out.N_T = std::max(out.N_T, 0.0);
  out.eta = 1.0 / (out.N_T + 1.0);
  out.added_noise_A = (total_gain - 1.0) / total_gain * (out.N_T + 0.5);
  out.eta_bar = 1.0 / (2.0 * out.added_noise_A + 1.0);

  // Large-gain (Friis) limit in the two-stage form.
  if (chain.stages.size() >= 2) {
    const auto& s1 = chain.stages[0];
    const auto& s2 = chain.stages[1];
    out.N_T_approx = (1.0 + s1.added_noise + s2.added_noise / (s2.transmissivity * s1.gain)) /
                         s1.transmissivity -
                     1.0;
  } else {
    out.N_T_approx = (1.0 + chain.stages[0].added_noise) / chain.stages[0].transmissivity - 1.0;
  }
  return out;
}

namespace {

struct IntegratedMeans {
  double ig, qg, ie, qe;  // normalized weighted integrals, sqrt(kappa)-scaled
  double weight_norm;     // int (wX^2 + wP^2) dt
  bool degenerate;        // weights vanish: no signal separation at all
};

IntegratedMeans integrate_records(const PointerTrajectory& traj, double tau_m,
                                  const SnrWeights* weights) {
  if (tau_m <= 0.0) throw Error(ErrorKind::invalid_argument, "readout", "tau_m must be positive");
  double t_end = traj.times.front() + tau_m;
  if (t_end > traj.times.back() + 1e-12 * tau_m)
    throw Error(ErrorKind::invalid_argument, "readout", "tau_m exceeds the trajectory span");

  auto wx = [&](size_t k) {
    if (weights && weights->wX) return weights->wX(traj.times[k]);
    return std::abs(std::real(traj.alpha_e[k]) - std::real(traj.alpha_g[k]));
  };
  auto wp = [&](size_t k) {
    if (weights && weights->wP) return weights->wP(traj.times[k]);
    return std::abs(std::imag(traj.alpha_e[k]) - std::imag(traj.alpha_g[k]));
  };

  double ig = 0.0, qg = 0.0, ie = 0.0, qe = 0.0, norm = 0.0;
  for (size_t k = 1; k < traj.times.size() && traj.times[k - 1] < t_end; ++k) {
    double t1 = std::min(traj.times[k], t_end);
    double dt = t1 - traj.times[k - 1];
    if (dt <= 0.0) continue;
    // Trapezoid on the stored samples.
    auto seg = [&](auto f) { return 0.5 * dt * (f(k - 1) + f(k)); };
    ig += seg([&](size_t j) { return wx(j) * std::real(traj.alpha_g[j]); });
    ie += seg([&](size_t j) { return wx(j) * std::real(traj.alpha_e[j]); });
    qg += seg([&](size_t j) { return wp(j) * std::imag(traj.alpha_g[j]); });
    qe += seg([&](size_t j) { return wp(j) * std::imag(traj.alpha_e[j]); });
    norm += seg([&](size_t j) { return wx(j) * wx(j) + wp(j) * wp(j); });
  }
  if (norm <= 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0, true};
  double scale = std::sqrt(traj.kappa) / std::sqrt(norm);
  return {ig * scale, qg * scale, ie * scale, qe * scale, norm, false};
}

// Deterministic Box-Muller on splitmix-seeded xoshiro-free std engine; we
// avoid std::normal_distribution so records are bit-stable across library
// implementations.
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(two_pi * u2);
    have_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  double uniform() {
    // splitmix64; map to (0,1].
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
  }
  uint64_t state_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace

double snr(const PointerTrajectory& trajectory, double eta, double tau_m, const SnrWeights* weights) {
  if (eta <= 0.0 || eta > 1.0)
    throw Error(ErrorKind::invalid_argument, "readout", "eta must be in (0,1]");
  IntegratedMeans m = integrate_records(trajectory, tau_m, weights);
  if (m.degenerate) return 0.0;  // identical pointer states carry no signal
  double d2 = (m.ie - m.ig) * (m.ie - m.ig) + (m.qe - m.qg) * (m.qe - m.qg);
  double variance = 1.0 / (4.0 * eta);
  return std::sqrt(d2 / (2.0 * variance));
}

double measurement_fidelity(double snr_value) { return 1.0 - std::erfc(snr_value / 2.0); }

HeterodyneRecords synthesize_heterodyne_records(const PointerTrajectory& trajectory, double eta,
                                                double tau_m, int n_shots, uint64_t seed,
                                                const SnrWeights* weights) {
  if (n_shots <= 0) throw Error(ErrorKind::invalid_argument, "readout", "n_shots must be positive");
  if (eta <= 0.0 || eta > 1.0)
    throw Error(ErrorKind::invalid_argument, "readout", "eta must be in (0,1]");
  IntegratedMeans m = integrate_records(trajectory, tau_m, weights);
  double sigma = std::sqrt(1.0 / (4.0 * eta));

  HeterodyneRecords rec;
  rec.mean_I_g = m.ig;
  rec.mean_Q_g = m.qg;
  rec.mean_I_e = m.ie;
  rec.mean_Q_e = m.qe;
  rec.noise_variance = sigma * sigma;
  rec.I_g.reserve(static_cast<size_t>(n_shots));
  rec.Q_g.reserve(static_cast<size_t>(n_shots));
  rec.I_e.reserve(static_cast<size_t>(n_shots));
  rec.Q_e.reserve(static_cast<size_t>(n_shots));
  GaussianSource gauss(seed);
  for (int s = 0; s < n_shots; ++s) {
    rec.I_g.push_back(m.ig + sigma * gauss.next());
    rec.Q_g.push_back(m.qg + sigma * gauss.next());
    rec.I_e.push_back(m.ie + sigma * gauss.next());
    rec.Q_e.push_back(m.qe + sigma * gauss.next());
  }
  return rec;
}

double histogram_fidelity(const HeterodyneRecords& records, int bins) {
  if (records.I_g.empty() || records.I_e.empty())
    throw Error(ErrorKind::invalid_argument, "readout", "empty record set");
  if (bins < 8) throw Error(ErrorKind::invalid_argument, "readout", "too few histogram bins");

  // Project on the line joining the two means.
  double dx = records.mean_I_e - records.mean_I_g;
  double dy = records.mean_Q_e - records.mean_Q_g;
  double norm = std::hypot(dx, dy);
  double ux = (norm > 0.0) ? dx / norm : 1.0;
  double uy = (norm > 0.0) ? dy / norm : 0.0;

  const size_t n = records.I_g.size();
  std::vector<double> sg(n), se(records.I_e.size());
  for (size_t k = 0; k < n; ++k) sg[k] = ux * records.I_g[k] + uy * records.Q_g[k];
  for (size_t k = 0; k < se.size(); ++k) se[k] = ux * records.I_e[k] + uy * records.Q_e[k];

  double lo = std::min(*std::min_element(sg.begin(), sg.end()), *std::min_element(se.begin(), se.end()));
  double hi = std::max(*std::max_element(sg.begin(), sg.end()), *std::max_element(se.begin(), se.end()));
  if (hi <= lo) return 0.0;
  double width = (hi - lo) / bins;

  std::vector<double> hg(static_cast<size_t>(bins), 0.0), he(static_cast<size_t>(bins), 0.0);
  auto fill = [&](const std::vector<double>& s, std::vector<double>& h) {
    for (double v : s) {
      int b = std::min(bins - 1, static_cast<int>((v - lo) / width));
      h[static_cast<size_t>(std::max(0, b))] += 1.0 / static_cast<double>(s.size());
    }
  };
  fill(sg, hg);
  fill(se, he);
  double overlap = 0.0;
  for (int b = 0; b < bins; ++b)
    overlap += std::min(hg[static_cast<size_t>(b)], he[static_cast<size_t>(b)]);
  return 1.0 - overlap;
}

double efficiency_from_snr(double snr_value, const PointerTrajectory& trajectory, double chi) {
  double beta = 0.0;
  for (size_t k = 1; k < trajectory.times.size(); ++k) {
    double dt = trajectory.times[k] - trajectory.times[k - 1];
    auto term = [&](size_t j) {
      return std::imag(trajectory.alpha_g[j] * std::conj(trajectory.alpha_e[j]));
    };
    beta += 0.5 * dt * (term(k - 1) + term(k));
  }
  beta *= 2.0 * chi;
  if (std::abs(beta) < 1e-30)
    throw Error(ErrorKind::undefined_efficiency, "readout",
                "beta_m vanishes; efficiency is undefined for unseparated pointers");
  return snr_value * snr_value / (4.0 * beta);
}

void demodulate_iq(const std::vector<double>& times, const std::vector<double>& v_i,
                   const std::vector<double>& v_q, const HeterodyneConfig& config,
                   std::vector<double>& x_out, std::vector<double>& p_out) {
  if (times.size() != v_i.size() || times.size() != v_q.size())
    throw Error(ErrorKind::invalid_argument, "readout", "record arrays have different lengths");
  x_out.resize(times.size());
  p_out.resize(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    double c = std::cos(config.omega_IF * times[k]);
    double s = std::sin(config.omega_IF * times[k]);
    x_out[k] = (v_i[k] * c - v_q[k] * s) / config.V_IF;
    p_out[k] = -(v_i[k] * s + v_q[k] * c) / config.V_IF;
  }
}

}  // namespace cqed
