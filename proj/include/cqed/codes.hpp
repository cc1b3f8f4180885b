#pragma once

#include <functional>
#include <string>

#include "cqed/hilbert.hpp"

namespace cqed {

struct CodeSpec {
  std::string name;
  HilbertSpace space;
  std::vector<Vector> codewords;   // orthonormal logical kets
  std::vector<Matrix> error_set;   // includes the identity
  std::vector<Matrix> stabilizers;

  // Orthonormality 1e-10; stabilizers square to identity and fix all
  // codewords with +1 eigenvalue.
  void validate() const;
  Matrix projector() const;
};

struct LossChannel {
  double kappa_t = 0.0;
  std::vector<Matrix> kraus;  // sum K'K = I within 1e-10
};

// |0L> = (|0> + |4>)/sqrt2, |1L> = |2>; stabilizer (-1)^n, errors {I, a}.
CodeSpec binomial_code(int dim);

// legs = 2: |+L>, |-L> ~ |alpha> +/- |-alpha>; legs = 4: even-4n / 4n+2 words.
CodeSpec cat_code(double alpha, int legs, int dim);

// Four-qubit amplitude-damping code on (C^2)^4 with stabilizers
// Z1 Z2, Z3 Z4, X1 X2 X3 X4 and errors {I, sigma-_i}.
CodeSpec four_qubit_code();

// Bosonic amplitude damping with loss probability 1 - e^{-kappa_t}; exactly
// complete on the truncated space.
LossChannel amplitude_damping_kraus(double kappa_t, int dim);

// Single-qubit amplitude damping on each of the four qubits.
LossChannel four_qubit_damping(double gamma_t);

struct KnillLaflammeReport {
  double max_offdiagonal = 0.0;  // max_ab |<0L|Ea'Eb|1L>|
  double max_asymmetry = 0.0;    // max_ab |<0L|Ea'Eb|0L> - <1L|Ea'Eb|1L>| / 2
  bool satisfied_exactly = false;  // both residuals < 1e-10
  double residual() const { return std::max(max_offdiagonal, max_asymmetry); }
};

KnillLaflammeReport knill_laflamme_check(const CodeSpec& code, const std::vector<Matrix>& errors);

enum class KlOrder { exact, first_order, violated };

struct KlScalingReport {
  KlOrder verdict = KlOrder::violated;
  double exponent = 0.0;  // fitted residual scaling in kappa_t
  std::vector<double> residuals;
};

// Classifies correctability of a parametrized channel: residual below 1e-10
// everywhere is exact; residual scaling at least ~ (kappa_t)^1.5 counts as
// first-order correctable (KL violations only beyond leading order).
KlScalingReport kl_scaling(const CodeSpec& code,
                           const std::function<std::vector<Matrix>(double)>& channel,
                           const std::vector<double>& kappa_t_grid);

struct RecoveryBenchmark {
  std::vector<double> kappa_t;
  std::vector<double> infidelity_recovered;
  std::vector<double> infidelity_bare;
  double exponent_recovered = 0.0;
  double exponent_bare = 0.0;
};

// Entanglement infidelity of the encoded identity vs kappa_t, with and
// without the Petz (transpose-channel) recovery built from the code space.
RecoveryBenchmark recovery_benchmark(const CodeSpec& code,
                                     const std::function<std::vector<Matrix>(double)>& channel,
                                     const std::vector<double>& kappa_t_grid);

// Petz recovery Kraus set P K_k' N(P)^{-1/2}, completed on the orthocomplement.
std::vector<Matrix> petz_recovery(const CodeSpec& code, const std::vector<Matrix>& kraus);

}  // namespace cqed
