#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "cqed/devices.hpp"

using namespace cqed;

namespace {

std::vector<double> eigenvalues(const Operator& op, int count) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

double charge_dispersion_01(double ej_ec, double ec, int ncut) {
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k <= 40; ++k) {
    TransmonParams p{ej_ec * ec, ec, k / 40.0, 0.0, 0.0, 0.0};
    auto levels = transmon_charge_levels(p, ncut, 2);
    lo = std::min(lo, levels[1]);
    hi = std::max(hi, levels[1]);
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("charge basis at EJ = 0 gives bare charging parabolas") {
  TransmonParams p{0.0, 0.25e9, 0.3, 0.0, 0.0, 0.0};
  Operator h = transmon_charge_hamiltonian(p, 6);
  std::vector<double> expected;
  for (int n = -6; n <= 6; ++n) expected.push_back(two_pi * 4.0 * p.EC * (n - p.ng) * (n - p.ng));
  std::sort(expected.begin(), expected.end());
  auto ev = eigenvalues(h, 13);
  for (int k = 0; k < 13; ++k)
    CHECK(ev[static_cast<size_t>(k)] ==
          doctest::Approx(expected[static_cast<size_t>(k)]).epsilon(1e-6));
}

TEST_CASE("transmon 01 frequency approaches the Duffing estimate at EJ/EC = 50") {
  double ec = 0.25e9;
  TransmonParams p{50.0 * ec, ec, 0.0, 0.0, 0.0, 0.0};
  auto levels = transmon_charge_levels(p, 40, 2);
  double f01 = levels[1] / two_pi;
  double duffing = std::sqrt(8.0 * 50.0) * 0.25e9 - 0.25e9;  // 4.75 GHz
  CHECK(std::abs(f01 - duffing) / duffing < 0.02);
}

TEST_CASE("charge dispersion collapses in the transmon regime") {
  double ec = 0.25e9;
  double d50 = charge_dispersion_01(50.0, ec, 25);
  double d5 = charge_dispersion_01(5.0, ec, 25);
  CHECK(d5 / d50 > 1e4);
}

TEST_CASE("charge spectrum is periodic in ng and symmetric about 0 and 1/2") {
  double ec = 0.3e9;
  for (double ng : {0.1, 0.27, 0.42}) {
    TransmonParams a{5.0 * ec, ec, ng, 0.0, 0.0, 0.0};
    TransmonParams b = a;
    b.ng = ng + 1.0;
    TransmonParams c = a;
    c.ng = -ng;
    TransmonParams d = a;
    d.ng = 1.0 - ng;
    auto la = transmon_charge_levels(a, 20, 4);
    auto lb = transmon_charge_levels(b, 20, 4);
    auto lc = transmon_charge_levels(c, 20, 4);
    auto ld = transmon_charge_levels(d, 20, 4);
    for (size_t k = 0; k < la.size(); ++k) {
      CHECK(la[k] == doctest::Approx(lb[k]).epsilon(1e-9));
      CHECK(la[k] == doctest::Approx(lc[k]).epsilon(1e-9));
      CHECK(la[k] == doctest::Approx(ld[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("Duffing model") {
  TransmonParams p{12.5e9, 0.25e9, 0.0, 0.0, 0.0, 0.0};
  Operator h = transmon_duffing_hamiltonian(p, 5);
  double w01 = (h.matrix()(1, 1) - h.matrix()(0, 0)).real();
  double w12 = (h.matrix()(2, 2) - h.matrix()(1, 1)).real();
  CHECK(w12 - w01 == doctest::Approx(-two_pi * p.EC).epsilon(1e-12));

  auto charge = transmon_charge_levels(p, 30, 2);
  CHECK(std::abs(w01 - charge[1]) / charge[1] < 0.02);
}

TEST_CASE("Duffing anharmonicity tracks the charge basis in the transmon regime") {
  // The exact charge-basis anharmonicity carries a sqrt(EC/8EJ) correction
  // beyond -EC: 23.6% at EJ/EC = 30, 14.9% at 50, 9.5% at 100 (values agree
  // with published exact diagonalization). Assert the true convergence.
  double ec = 0.3e9;
  double prev = 1e300;
  for (double ratio : {30.0, 50.0, 80.0, 100.0}) {
    TransmonParams p{ratio * ec, ec, 0.0, 0.0, 0.0, 0.0};
    auto levels = transmon_charge_levels(p, 30, 3);
    double anharm_exact = (levels[2] - levels[1]) - levels[1];
    double rel = std::abs(anharm_exact - (-two_pi * ec)) / (two_pi * ec);
    CHECK(rel < 0.25);
    CHECK(rel < prev);
    prev = rel;
    if (ratio >= 100.0) CHECK(rel < 0.10);
  }
}

TEST_CASE("flux-tuned EJ") {
  CHECK(flux_tuned_EJ(0.0, 20e9, 0.3) == doctest::Approx(20e9));
  CHECK(std::abs(flux_tuned_EJ(0.5, 20e9, 0.0)) < 1e-4);
  CHECK(flux_tuned_EJ(0.5, 20e9, 0.1) == doctest::Approx(0.1 * 20e9));
  // Even in flux and Phi0-periodic for the frequency (|EJ| enters).
  for (double f : {0.13, 0.31, 0.48}) {
    CHECK(std::abs(flux_tuned_EJ(f, 20e9, 0.2)) ==
          doctest::Approx(std::abs(flux_tuned_EJ(-f, 20e9, 0.2))));
    CHECK(std::abs(flux_tuned_EJ(f, 20e9, 0.2)) ==
          doctest::Approx(std::abs(flux_tuned_EJ(f + 1.0, 20e9, 0.2))));
  }
}

TEST_CASE("flux-tuned transmon frequency is even and Phi0-periodic") {
  TransmonParams p{0.0, 0.3e9, 0.0, 20e9, 0.2, 0.0};
  for (double f : {0.08, 0.21, 0.37}) {
    TransmonParams a = p, b = p, c = p;
    a.flux = f;
    b.flux = -f;
    c.flux = f + 1.0;
    CHECK(duffing_frequency(a) == doctest::Approx(duffing_frequency(b)).epsilon(1e-12));
    CHECK(duffing_frequency(a) == doctest::Approx(duffing_frequency(c)).epsilon(1e-12));
  }
  // Between sweet spots the frequency falls monotonically.
  double prev = 1e300;
  for (double f : {0.0, 0.1, 0.2, 0.3, 0.4}) {
    TransmonParams q = p;
    q.flux = f;
    double w = duffing_frequency(q);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("resonator mode frequencies") {
  ResonatorGeometry line;
  line.v0 = 1.3e8;
  line.length = 0.01;
  auto modes = resonator_mode_frequencies(ResonatorKind::half_wave, line, 4);
  CHECK(modes[0] / two_pi == doctest::Approx(6.5e9));
  CHECK(modes[3] == doctest::Approx(4.0 * modes[0]));

  auto quarter = resonator_mode_frequencies(ResonatorKind::quarter_wave, line, 1);
  CHECK(quarter[0] / two_pi == doctest::Approx(3.25e9));

  ResonatorGeometry box;
  box.a = box.b = box.d = 0.02;
  auto cavity = resonator_mode_frequencies(ResonatorKind::rectangular_3d, box, 3);
  CHECK(cavity[0] == doctest::Approx(speed_of_light * pi * std::sqrt(2.0) / box.a));

  ResonatorGeometry bad;
  CHECK_THROWS_AS(resonator_mode_frequencies(ResonatorKind::half_wave, bad, 2), Error);
}

TEST_CASE("thermal occupation") {
  CHECK(thermal_occupation(92e6, 0.010) == doctest::Approx(1.8).epsilon(0.06));
  CHECK(thermal_occupation(5e9, 0.0) == 0.0);
  // hf = kT
  double f = boltzmann_k * 0.05 / planck_h;
  CHECK(thermal_occupation(f, 0.05) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)));
}

TEST_CASE("LC zero-point scales") {
  auto z = lc_zero_point(0.8e-9, 0.4e-12);
  double omega = 1.0 / std::sqrt(0.8e-9 * 0.4e-12);
  CHECK(omega / two_pi > 8e9);
  CHECK(omega / two_pi < 9e9);
  CHECK(std::sqrt(0.8e-9 / 0.4e-12) == doctest::Approx(44.7).epsilon(0.01));
  CHECK(z.dV0 == doctest::Approx(1e-6).epsilon(0.35));  // ~1 uV
  CHECK(z.phi_zpf * z.q_zpf == doctest::Approx(hbar / 2.0).epsilon(1e-12));

  // dV0 scales as sqrt(omega / C).
  auto z4 = lc_zero_point(0.8e-9, 4.0 * 0.4e-12);
  double omega4 = omega / 2.0;
  CHECK(z4.dV0 / z.dV0 == doctest::Approx(std::sqrt(omega4 / omega / 4.0)));
}

TEST_CASE("coupling constant, both algebraic forms") {
  CHECK(coupling_g(two_pi * 8e9, 0.0, 12.5e9, 0.25e9, 50.0) == 0.0);
  for (double zr : {30.0, 50.0, 80.0})
    for (double ratio : {20.0, 50.0, 80.0}) {
      double g1 = coupling_g(two_pi * 8e9, 0.1, ratio * 0.25e9, 0.25e9, zr);
      double g2 = coupling_g_fine_structure(two_pi * 8e9, 0.1, ratio * 0.25e9, 0.25e9, zr);
      CHECK(std::abs(g1 - g2) / g1 < 1e-12);
    }
  // Fixed-point value: wr/2pi = 8 GHz, Cg/Cs = 0.1, EJ/EC = 50, Zr = 50.
  double g = coupling_g(two_pi * 8e9, 0.1, 50.0 * 0.25e9, 0.25e9, 50.0);
  double expected =
      two_pi * 8e9 * 0.1 * std::pow(25.0, 0.25) * std::sqrt(pi * 50.0 / resistance_quantum);
  CHECK(g == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("black-box cross-Kerr") {
  BBQMode m1{two_pi * 6e9, 0.5};
  BBQMode m2{two_pi * 6e9, 0.5};
  auto kerr = bbq_cross_kerr({m1, m2}, 20e9);
  double expected = -two_pi * (6e9 * 6e9 * 0.25) / (4.0 * 20e9);  // -2pi 112.5 MHz
  CHECK(kerr.chi(0, 1) == doctest::Approx(expected));
  CHECK(kerr.chi(0, 1) / two_pi == doctest::Approx(-112.5e6));
  CHECK(kerr.self_kerr[0] == doctest::Approx(kerr.chi(0, 0) / 2.0));
  CHECK(kerr.lamb_shift[0] == doctest::Approx(0.5 * (kerr.chi(0, 0) + kerr.chi(0, 1))));

  BBQMode off{two_pi * 5e9, 0.0};
  auto kerr2 = bbq_cross_kerr({off, m2}, 20e9);
  CHECK(kerr2.chi.row(0).cwiseAbs().maxCoeff() == 0.0);
}
