#pragma once

#include <memory>
#include <optional>

#include "cqed/core.hpp"

namespace cqed {

// Tensor-product structure of a truncated Hilbert space. Subsystem order is
// the Kronecker order: index 0 is the slowest-varying factor.
class HilbertSpace {
 public:
  HilbertSpace() : dims_{1}, total_dim_(1) {}  // trivial space
  explicit HilbertSpace(std::vector<int> subsystem_dims);

  const std::vector<int>& dims() const { return dims_; }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  int dim(int index) const;
  int total_dim() const { return total_dim_; }

  bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }
  bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  int total_dim_ = 0;
};

// Dense operator on a HilbertSpace. Values are immutable after construction.
// Conventions: Hamiltonians are stored as H/hbar, entries in rad/s.
class Operator {
 public:
  Operator(HilbertSpace space, Matrix matrix, bool hermitian_hint = false);

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return mat_; }
  bool hermitian_hint() const { return hermitian_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  Operator dagger() const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(Complex scalar) const;
  Operator operator*(double scalar) const;

  static Operator identity(const HilbertSpace& space);

 private:
  HilbertSpace space_;
  Matrix mat_;
  bool hermitian_ = false;
};

inline Operator operator*(Complex s, const Operator& op) { return op * s; }
inline Operator operator*(double s, const Operator& op) { return op * s; }

// Pure ket or density matrix on a HilbertSpace. Construction validates
// normalization (1e-10) and, for density matrices, Hermiticity and
// positivity down to a -1e-10 eigenvalue floor.
class QuantumState {
 public:
  static QuantumState ket(HilbertSpace space, Vector amplitudes);
  static QuantumState density(HilbertSpace space, Matrix rho);
  static QuantumState basis(const HilbertSpace& space, const std::vector<int>& occupation);

  bool is_ket() const { return ket_.has_value(); }
  const HilbertSpace& space() const { return space_; }
  const Vector& ket_vector() const;
  // Density matrix view; built from the ket when needed.
  Matrix density_matrix() const;

 private:
  explicit QuantumState(HilbertSpace space) : space_(std::move(space)) {}
  HilbertSpace space_;
  std::optional<Vector> ket_;
  std::optional<Matrix> rho_;
};

// Annihilation/creation pair on a single mode: <n-1|a|n> = sqrt(n).
std::pair<Operator, Operator> ladder_operators(int dim);
Operator number_operator(int dim);
Operator parity_operator(int dim);

// Kronecker product in declared subsystem order.
Operator tensor(const std::vector<Operator>& operators);
// Lift a single-subsystem operator to the composite space, identity elsewhere.
Operator embed(const Operator& op, int index, const HilbertSpace& space);

Complex expectation(const QuantumState& state, const Operator& op);
Complex expectation(const Matrix& rho, const Operator& op);

// Partial trace keeping only subsystem `keep`.
Matrix partial_trace(const Matrix& rho, const HilbertSpace& space, int keep);
// Population of the top level of subsystem `index`; used for leakage checks.
double top_level_population(const Matrix& rho, const HilbertSpace& space, int index);

// exp(-i H t) for Hermitian H via eigendecomposition; unitary to solver
// accuracy regardless of ||H t||.
Matrix hermitian_propagator(const Matrix& h, double t);
// exp(M) for a general matrix (scaling-and-squaring Pade).
Matrix matrix_exponential(const Matrix& m);

double hermiticity_defect(const Matrix& m);

}  // namespace cqed
