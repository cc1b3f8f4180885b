#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqed/codes.hpp"
#include "cqed/coupling.hpp"
#include "cqed/devices.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/gates.hpp"
#include "cqed/phasespace.hpp"
#include "cqed/readout.hpp"
#include "cqed/scenarios.hpp"

namespace py = pybind11;
using namespace cqed;

namespace {

Operator operator_from_matrix(const Matrix& m, bool hermitian) {
  return Operator(HilbertSpace({static_cast<int>(m.rows())}), m, hermitian);
}

LindbladModel build_model(const Matrix& h, const std::vector<std::pair<double, Matrix>>& collapse) {
  HilbertSpace space({static_cast<int>(h.rows())});
  LindbladModel model{Operator(space, h, true), {}, {}};
  for (const auto& [rate, op] : collapse) model.collapse.push_back({rate, Operator(space, op)});
  return model;
}

}  // namespace

PYBIND11_MODULE(_cqed, m) {
  m.doc() = "Circuit QED simulation core: device Hamiltonians, dispersive theory, "
            "Lindblad dynamics, dispersive readout, phase space, gates and bosonic codes.";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "CqedError");

  // hilbert ------------------------------------------------------------
  m.def(
      "ladder_operators",
      [](int dim) {
        auto [a, ad] = ladder_operators(dim);
        return std::make_pair(a.matrix(), ad.matrix());
      },
      py::arg("dim"), "Annihilation/creation pair on a truncated mode");
  m.def("number_operator", [](int dim) { return number_operator(dim).matrix(); }, py::arg("dim"));
  m.def("parity_operator", [](int dim) { return parity_operator(dim).matrix(); }, py::arg("dim"));
  m.def(
      "tensor",
      [](const std::vector<Matrix>& ops) {
        std::vector<Operator> wrapped;
        for (const auto& o : ops) wrapped.push_back(operator_from_matrix(o, false));
        return tensor(wrapped).matrix();
      },
      py::arg("operators"));
  m.def(
      "embed",
      [](const Matrix& op, int index, const std::vector<int>& dims) {
        HilbertSpace space(dims);
        return embed(Operator(HilbertSpace({static_cast<int>(op.rows())}), op), index, space).matrix();
      },
      py::arg("op"), py::arg("index"), py::arg("dims"));
  m.def("hermitian_propagator", &hermitian_propagator, py::arg("h"), py::arg("t"),
        "exp(-i H t) for Hermitian H");

  // devices --------------------------------------------------------------
  py::class_<TransmonParams>(m, "TransmonParams")
      .def(py::init([](double ej, double ec, double ng, double ej_sum, double d_asym, double flux) {
             return TransmonParams{ej, ec, ng, ej_sum, d_asym, flux};
           }),
           py::arg("EJ"), py::arg("EC"), py::arg("ng") = 0.0, py::arg("EJ_sum") = 0.0,
           py::arg("d_asym") = 0.0, py::arg("flux") = 0.0)
      .def_readwrite("EJ", &TransmonParams::EJ)
      .def_readwrite("EC", &TransmonParams::EC)
      .def_readwrite("ng", &TransmonParams::ng)
      .def_readwrite("flux", &TransmonParams::flux);

  m.def(
      "transmon_charge_hamiltonian",
      [](const TransmonParams& p, int ncut) { return transmon_charge_hamiltonian(p, ncut).matrix(); },
      py::arg("params"), py::arg("ncut"));
  m.def("transmon_charge_levels", &transmon_charge_levels, py::arg("params"), py::arg("ncut"),
        py::arg("count"));
  m.def(
      "transmon_duffing_hamiltonian",
      [](const TransmonParams& p, int dim) { return transmon_duffing_hamiltonian(p, dim).matrix(); },
      py::arg("params"), py::arg("dim"));
  m.def("flux_tuned_EJ", &flux_tuned_EJ, py::arg("flux"), py::arg("EJ_sum"), py::arg("d_asym"));
  m.def("thermal_occupation", &thermal_occupation, py::arg("freq_hz"), py::arg("temperature_k"));
  m.def("coupling_g", &coupling_g, py::arg("omega_r"), py::arg("cg_over_csigma"), py::arg("EJ"),
        py::arg("EC"), py::arg("Z_r"));

  // coupling ---------------------------------------------------------------
  py::class_<JCDoublet>(m, "JCDoublet")
      .def_readonly("E_lower", &JCDoublet::E_lower)
      .def_readonly("E_upper", &JCDoublet::E_upper)
      .def_readonly("theta_n", &JCDoublet::theta_n);
  m.def("jc_spectrum", &jc_spectrum, py::arg("n"), py::arg("omega_r"), py::arg("omega_q"),
        py::arg("g"));

  py::class_<DispersiveParams>(m, "DispersiveParams")
      .def_readonly("chi", &DispersiveParams::chi)
      .def_readonly("chi_j", &DispersiveParams::chi_j)
      .def_readonly("Lambda_j", &DispersiveParams::Lambda_j)
      .def_readonly("omega_r_dressed", &DispersiveParams::omega_r_dressed)
      .def_readonly("omega_q_dressed", &DispersiveParams::omega_q_dressed)
      .def_readonly("K_a", &DispersiveParams::K_a)
      .def_readonly("K_b", &DispersiveParams::K_b)
      .def_readonly("chi_ab", &DispersiveParams::chi_ab)
      .def_readonly("n_crit", &DispersiveParams::n_crit);
  m.def("dispersive_params_sw", &dispersive_params_sw, py::arg("omega_r"), py::arg("omega_q"),
        py::arg("EC"), py::arg("g"), py::arg("levels") = 4);
  m.def(
      "bogoliubov_dressed",
      [](double wr, double wq, double g) {
        auto d = bogoliubov_dressed(wr, wq, g);
        return std::make_tuple(d.omega_r_tilde, d.omega_q_tilde, d.Lambda_angle);
      },
      py::arg("omega_r"), py::arg("omega_q"), py::arg("g"));
  m.def(
      "rabi_hamiltonian",
      [](int transmon_dim, int resonator_dim, double wr, double wq, double ec, double g, bool rwa) {
        return rabi_hamiltonian({transmon_dim, resonator_dim, wr, wq, ec, g, rwa}).matrix();
      },
      py::arg("transmon_dim"), py::arg("resonator_dim"), py::arg("omega_r"), py::arg("omega_q"),
      py::arg("EC"), py::arg("g"), py::arg("rwa") = true);

  // dynamics -----------------------------------------------------------
  m.def(
      "evolve",
      [](const Matrix& h, const std::vector<std::pair<double, Matrix>>& collapse, const Matrix& rho0,
         const std::vector<double>& times, const std::vector<Matrix>& observables) {
        LindbladModel model = build_model(h, collapse);
        HilbertSpace space = model.hamiltonian.space();
        std::vector<Operator> obs;
        for (const auto& o : observables) obs.push_back(Operator(space, o));
        auto result = evolve(model, QuantumState::density(space, rho0), times, obs);
        return result.expectations;
      },
      py::arg("hamiltonian"), py::arg("collapse"), py::arg("rho0"), py::arg("times"),
      py::arg("observables"),
      "Lindblad evolution; returns expectation values (times x observables)");
  m.def(
      "steady_state",
      [](const Matrix& h, const std::vector<std::pair<double, Matrix>>& collapse) {
        return steady_state(build_model(h, collapse)).density_matrix();
      },
      py::arg("hamiltonian"), py::arg("collapse"));
  m.def(
      "dispersive_rates",
      [](double g, double delta, double kappa, double gamma, double gphi) {
        auto r = dispersive_rates(g, delta, kappa, gamma, gphi);
        py::dict out;
        out["gamma_Purcell"] = r.gamma_Purcell;
        out["gamma_Purcell_interp"] = r.gamma_Purcell_interp;
        out["kappa_inverse_Purcell"] = r.kappa_inverse_Purcell;
        out["gamma_Delta"] = r.gamma_Delta;
        out["gamma1"] = r.gamma1;
        out["gamma2"] = r.gamma2;
        out["T1"] = r.T1;
        out["T2"] = r.T2;
        return out;
      },
      py::arg("g"), py::arg("Delta"), py::arg("kappa"), py::arg("gamma"), py::arg("gamma_phi"));
  m.def(
      "qubit_lineshape",
      [](double omega_R, double gamma1, double gamma_phi, const std::vector<double>& grid,
         const std::string& method) {
        return qubit_lineshape(omega_R, gamma1, gamma_phi, grid,
                               method == "master" ? LineshapeMethod::master_equation
                                                  : LineshapeMethod::formula);
      },
      py::arg("OmegaR"), py::arg("gamma1"), py::arg("gamma_phi"), py::arg("detuning_grid"),
      py::arg("method") = "formula");

  // readout ------------------------------------------------------------
  py::class_<PointerTrajectory>(m, "PointerTrajectory")
      .def_readonly("times", &PointerTrajectory::times)
      .def_readonly("alpha_g", &PointerTrajectory::alpha_g)
      .def_readonly("alpha_e", &PointerTrajectory::alpha_e);
  m.def(
      "pointer_evolution",
      [](double epsilon, double delta_r, double chi, double kappa, const std::vector<double>& grid,
         double gamma1) {
        return pointer_evolution([epsilon](double) { return Complex(epsilon, 0.0); }, delta_r, chi,
                                 kappa, grid, gamma1);
      },
      py::arg("epsilon"), py::arg("delta_r"), py::arg("chi"), py::arg("kappa"), py::arg("time_grid"),
      py::arg("gamma1") = 0.0);
  m.def("snr", [](const PointerTrajectory& t, double eta, double tau) { return snr(t, eta, tau); },
        py::arg("trajectory"), py::arg("eta"), py::arg("tau_m"));
  m.def("measurement_fidelity", &measurement_fidelity, py::arg("snr"));
  m.def(
      "chain_noise",
      [](const std::vector<std::tuple<double, double, double>>& stages) {
        MeasurementChain chain;
        for (const auto& [g, n, eta] : stages) chain.stages.push_back({g, n, eta});
        auto r = chain_noise(chain);
        py::dict out;
        out["N_T"] = r.N_T;
        out["N_T_approx"] = r.N_T_approx;
        out["eta"] = r.eta;
        out["eta_bar"] = r.eta_bar;
        out["total_gain"] = r.total_gain;
        return out;
      },
      py::arg("stages"), "stages: list of (gain, added_noise, transmissivity)");
  m.def(
      "synthesize_heterodyne_records",
      [](const PointerTrajectory& t, double eta, double tau, int shots, uint64_t seed) {
        auto r = synthesize_heterodyne_records(t, eta, tau, shots, seed);
        py::dict out;
        out["I_g"] = r.I_g;
        out["Q_g"] = r.Q_g;
        out["I_e"] = r.I_e;
        out["Q_e"] = r.Q_e;
        out["fidelity_histogram"] = histogram_fidelity(r);
        return out;
      },
      py::arg("trajectory"), py::arg("eta"), py::arg("tau_m"), py::arg("shots"), py::arg("seed"));

  // phasespace -----------------------------------------------------------
  m.def(
      "coherent_state",
      [](Complex alpha, int dim) { return Vector(coherent_state(alpha, dim).ket_vector()); },
      py::arg("alpha"), py::arg("dim"));
  m.def(
      "displacement_operator",
      [](Complex alpha, int dim) { return displacement_operator(alpha, dim).matrix(); },
      py::arg("alpha"), py::arg("dim"));
  m.def(
      "squeeze_operator",
      [](double r, double theta, int dim) { return squeeze_operator({r, theta}, dim).matrix(); },
      py::arg("r"), py::arg("theta"), py::arg("dim"));
  m.def("squeezed_vacuum_variance",
        [](double r, double theta, double phi) { return squeezed_vacuum_variance({r, theta}, phi); },
        py::arg("r"), py::arg("theta"), py::arg("phi"));
  m.def(
      "wigner",
      [](const Matrix& rho, double extent, int resolution) {
        PhaseSpaceGrid grid;
        grid.x_min = grid.p_min = -extent;
        grid.x_max = grid.p_max = extent;
        grid.resolution = resolution;
        HilbertSpace space({static_cast<int>(rho.rows())});
        return wigner(QuantumState::density(space, rho), grid).values;
      },
      py::arg("rho"), py::arg("extent") = 5.0, py::arg("resolution") = 101);
  m.def(
      "husimi_q",
      [](const Matrix& rho, double extent, int resolution) {
        PhaseSpaceGrid grid;
        grid.x_min = grid.p_min = -extent;
        grid.x_max = grid.p_max = extent;
        grid.resolution = resolution;
        HilbertSpace space({static_cast<int>(rho.rows())});
        return husimi_q(QuantumState::density(space, rho), grid).values;
      },
      py::arg("rho"), py::arg("extent") = 5.0, py::arg("resolution") = 101);

  // gates ---------------------------------------------------------------
  m.def("exchange_J", &exchange_J, py::arg("EC1"), py::arg("EC2"), py::arg("ECc"), py::arg("EJ1"),
        py::arg("EJ2"));
  m.def("mediated_J", &mediated_J, py::arg("g1"), py::arg("g2"), py::arg("Delta1"), py::arg("Delta2"));
  m.def(
      "iswap_gate",
      [](double J, double t) {
        auto r = iswap_gate(J, t);
        return std::make_pair(r.unitary, r.fidelity);
      },
      py::arg("J"), py::arg("t"));
  m.def(
      "cross_resonance_effective",
      [](double J, double d12, double ec1, double ec2, double eps) {
        auto c = cross_resonance_effective(J, d12, ec1, ec2, eps);
        py::dict out;
        out["x1"] = c.x1;
        out["x2"] = c.x2;
        out["zx"] = c.zx;
        out["zz"] = c.zz;
        out["chi12"] = c.chi12;
        out["J_prime"] = c.Jprime;
        return out;
      },
      py::arg("J"), py::arg("Delta12"), py::arg("EC1"), py::arg("EC2"), py::arg("epsilon"));
  m.def(
      "parametric_sideband",
      [](double J, double eps_mod, double omega_mod, double d12) {
        auto s = parametric_sideband(J, eps_mod, omega_mod, d12);
        return std::make_tuple(s.n, s.residual, s.effective_coupling);
      },
      py::arg("J"), py::arg("epsilon_mod"), py::arg("omega_mod"), py::arg("Delta12"));
  m.def("average_gate_fidelity", &average_gate_fidelity, py::arg("u"), py::arg("target"));
  m.def("sqrt_iswap_target", &sqrt_iswap_target);

  // codes ----------------------------------------------------------------
  m.def(
      "binomial_code",
      [](int dim) {
        CodeSpec c = binomial_code(dim);
        return std::make_pair(Vector(c.codewords[0]), Vector(c.codewords[1]));
      },
      py::arg("dim"));
  m.def(
      "cat_code",
      [](double alpha, int legs, int dim) {
        CodeSpec c = cat_code(alpha, legs, dim);
        return std::make_pair(Vector(c.codewords[0]), Vector(c.codewords[1]));
      },
      py::arg("alpha"), py::arg("legs"), py::arg("dim"));
  m.def(
      "knill_laflamme_residual",
      [](int dim) {
        CodeSpec c = binomial_code(dim);
        return knill_laflamme_check(c, c.error_set).residual();
      },
      py::arg("dim"), "KL residual of the binomial code with errors {I, a}");
  m.def(
      "recovery_exponents",
      [](int dim, const std::vector<double>& grid) {
        CodeSpec c = binomial_code(dim);
        auto bench = recovery_benchmark(
            c, [dim](double kt) { return amplitude_damping_kraus(kt, dim).kraus; }, grid);
        return std::make_pair(bench.exponent_recovered, bench.exponent_bare);
      },
      py::arg("dim"), py::arg("kappa_t_grid"));

  // scenarios --------------------------------------------------------------
  m.def(
      "run_scenario",
      [](const std::string& subcommand, const std::string& config_json, const std::string& out_dir,
         uint64_t seed, int threads) {
        auto outcome =
            run_scenario(subcommand, nlohmann::json::parse(config_json), out_dir, seed, threads);
        py::dict out;
        out["exit_code"] = outcome.exit_code;
        out["outputs"] = outcome.output_files;
        out["warnings"] = outcome.warnings;
        out["error"] = outcome.error.is_null() ? "" : outcome.error.dump();
        return out;
      },
      py::arg("subcommand"), py::arg("config_json"), py::arg("out_dir"), py::arg("seed") = 1,
      py::arg("threads") = 1);
  m.def("list_scenarios", [] {
    py::list out;
    for (const auto& s : list_scenarios()) {
      py::dict d;
      d["name"] = s.name;
      d["subcommand"] = s.subcommand;
      d["description"] = s.description;
      d["default_config"] = s.default_config.dump();
      out.append(d);
    }
    return out;
  });
}
