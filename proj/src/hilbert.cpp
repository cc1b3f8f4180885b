#include "cqed/hilbert.hpp"

#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cqed {

namespace {
constexpr double kHermitianTol = 1e-12;
constexpr double kStateTol = 1e-10;
}  // namespace

HilbertSpace::HilbertSpace(std::vector<int> subsystem_dims) : dims_(std::move(subsystem_dims)) {
  if (dims_.empty())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "space needs at least one subsystem");
  total_dim_ = 1;
  for (int d : dims_) {
    if (d < 1)
      throw Error(ErrorKind::invalid_dimension, "hilbert", "subsystem dimension must be >= 1");
    total_dim_ *= d;
  }
}

int HilbertSpace::dim(int index) const {
  if (index < 0 || index >= subsystems())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "subsystem index out of range");
  return dims_[static_cast<size_t>(index)];
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Operator::Operator(HilbertSpace space, Matrix matrix, bool hermitian_hint)
    : space_(std::move(space)), mat_(std::move(matrix)), hermitian_(hermitian_hint) {
  if (mat_.rows() != mat_.cols() || mat_.rows() != space_.total_dim())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "operator matrix does not match space dimension");
  // Relative tolerance: angular-frequency operators carry entries of order
  // 1e10, where an absolute 1e-12 defect bound would reject exact physics.
  if (hermitian_) {
    double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
    if (hermiticity_defect(mat_) >= kHermitianTol * scale)
      throw Error(ErrorKind::invalid_argument, "hilbert", "hermitian_hint set on a non-Hermitian matrix");
  }
}

Operator Operator::dagger() const { return Operator(space_, mat_.adjoint(), hermitian_); }

Operator Operator::operator+(const Operator& rhs) const {
  if (space_ != rhs.space_) throw Error(ErrorKind::space_mismatch, "hilbert", "operator spaces differ");
  return Operator(space_, mat_ + rhs.mat_, hermitian_ && rhs.hermitian_);
}

Operator Operator::operator-(const Operator& rhs) const {
  if (space_ != rhs.space_) throw Error(ErrorKind::space_mismatch, "hilbert", "operator spaces differ");
  return Operator(space_, mat_ - rhs.mat_, hermitian_ && rhs.hermitian_);
}

Operator Operator::operator*(const Operator& rhs) const {
  if (space_ != rhs.space_) throw Error(ErrorKind::space_mismatch, "hilbert", "operator spaces differ");
  return Operator(space_, mat_ * rhs.mat_, false);
}

Operator Operator::operator*(Complex scalar) const {
  bool herm = hermitian_ && scalar.imag() == 0.0;
  return Operator(space_, mat_ * scalar, herm);
}

Operator Operator::operator*(double scalar) const { return Operator(space_, mat_ * scalar, hermitian_); }

Operator Operator::identity(const HilbertSpace& space) {
  return Operator(space, Matrix::Identity(space.total_dim(), space.total_dim()), true);
}

QuantumState QuantumState::ket(HilbertSpace space, Vector amplitudes) {
  if (amplitudes.size() != space.total_dim())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "ket length does not match space dimension");
  if (std::abs(amplitudes.norm() - 1.0) > kStateTol)
    throw Error(ErrorKind::invalid_state, "hilbert", "ket is not normalized");
  QuantumState s(std::move(space));
  s.ket_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::density(HilbertSpace space, Matrix rho) {
  if (rho.rows() != rho.cols() || rho.rows() != space.total_dim())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "density matrix does not match space dimension");
  if (hermiticity_defect(rho) > kStateTol)
    throw Error(ErrorKind::invalid_state, "hilbert", "density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kStateTol || std::abs(rho.trace().imag()) > kStateTol)
    throw Error(ErrorKind::invalid_state, "hilbert", "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw Error(ErrorKind::invalid_state, "hilbert", "density matrix has a negative eigenvalue");
  QuantumState s(std::move(space));
  s.rho_ = std::move(rho);
  return s;
}

QuantumState QuantumState::basis(const HilbertSpace& space, const std::vector<int>& occupation) {
  if (static_cast<int>(occupation.size()) != space.subsystems())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "occupation list length mismatch");
  int idx = 0;
  for (int k = 0; k < space.subsystems(); ++k) {
    if (occupation[static_cast<size_t>(k)] < 0 || occupation[static_cast<size_t>(k)] >= space.dim(k))
      throw Error(ErrorKind::invalid_dimension, "hilbert", "occupation exceeds subsystem dimension");
    idx = idx * space.dim(k) + occupation[static_cast<size_t>(k)];
  }
  Vector v = Vector::Zero(space.total_dim());
  v(idx) = 1.0;
  return ket(space, std::move(v));
}

const Vector& QuantumState::ket_vector() const {
  if (!ket_) throw Error(ErrorKind::invalid_state, "hilbert", "state is a density matrix, not a ket");
  return *ket_;
}

Matrix QuantumState::density_matrix() const {
  if (rho_) return *rho_;
  return (*ket_) * ket_->adjoint();
}

std::pair<Operator, Operator> ladder_operators(int dim) {
  if (dim < 2) throw Error(ErrorKind::invalid_dimension, "hilbert", "ladder operators need dim >= 2");
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  HilbertSpace space({dim});
  return {Operator(space, a), Operator(space, a.adjoint())};
}

Operator number_operator(int dim) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "hilbert", "number operator needs dim >= 1");
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return Operator(HilbertSpace({dim}), n, true);
}

Operator parity_operator(int dim) {
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return Operator(HilbertSpace({dim}), p, true);
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

Operator tensor(const std::vector<Operator>& operators) {
  if (operators.empty())
    throw Error(ErrorKind::composition, "hilbert", "tensor of an empty operator list");
  std::vector<int> dims;
  Matrix result = operators.front().matrix();
  bool herm = operators.front().hermitian_hint();
  for (int d : operators.front().space().dims()) dims.push_back(d);
  for (size_t k = 1; k < operators.size(); ++k) {
    result = kron(result, operators[k].matrix());
    herm = herm && operators[k].hermitian_hint();
    for (int d : operators[k].space().dims()) dims.push_back(d);
  }
  return Operator(HilbertSpace(dims), std::move(result), herm);
}

Operator embed(const Operator& op, int index, const HilbertSpace& space) {
  if (index < 0 || index >= space.subsystems())
    throw Error(ErrorKind::composition, "hilbert", "embed index out of range");
  if (op.dim() != space.dim(index))
    throw Error(ErrorKind::composition, "hilbert", "embedded operator dimension mismatch");
  std::vector<Operator> factors;
  factors.reserve(static_cast<size_t>(space.subsystems()));
  for (int k = 0; k < space.subsystems(); ++k) {
    if (k == index)
      factors.push_back(Operator(HilbertSpace({space.dim(k)}), op.matrix(), op.hermitian_hint()));
    else
      factors.push_back(Operator::identity(HilbertSpace({space.dim(k)})));
  }
  Operator out = tensor(factors);
  return Operator(space, out.matrix(), out.hermitian_hint());
}

Complex expectation(const QuantumState& state, const Operator& op) {
  if (state.space() != op.space())
    throw Error(ErrorKind::space_mismatch, "hilbert", "state and operator spaces differ");
  if (state.is_ket()) {
    const Vector& psi = state.ket_vector();
    return psi.dot(op.matrix() * psi);
  }
  return (op.matrix() * state.density_matrix()).trace();
}

Complex expectation(const Matrix& rho, const Operator& op) {
  if (rho.rows() != op.dim())
    throw Error(ErrorKind::space_mismatch, "hilbert", "density matrix and operator dimensions differ");
  return (op.matrix() * rho).trace();
}

Matrix partial_trace(const Matrix& rho, const HilbertSpace& space, int keep) {
  if (keep < 0 || keep >= space.subsystems())
    throw Error(ErrorKind::invalid_dimension, "hilbert", "partial trace index out of range");
  // Group indices as (left, keep, right) and trace left and right.
  int dl = 1, dk = space.dim(keep), dr = 1;
  for (int k = 0; k < keep; ++k) dl *= space.dim(k);
  for (int k = keep + 1; k < space.subsystems(); ++k) dr *= space.dim(k);
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int l = 0; l < dl; ++l)
        for (int r = 0; r < dr; ++r)
          acc += rho((l * dk + i) * dr + r, (l * dk + j) * dr + r);
      out(i, j) = acc;
    }
  return out;
}

double top_level_population(const Matrix& rho, const HilbertSpace& space, int index) {
  Matrix reduced = partial_trace(rho, space, index);
  return reduced(reduced.rows() - 1, reduced.cols() - 1).real();
}

Matrix hermitian_propagator(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const auto& vals = es.eigenvalues();
  Vector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    phases(k) = std::exp(Complex(0.0, -vals(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix matrix_exponential(const Matrix& m) { return m.exp(); }

}  // namespace cqed
