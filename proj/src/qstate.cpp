#include "entwit/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entwit/error.hpp"

namespace entwit {

Eigen::Index dimension_of(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error("qubit_count", "expected 1.." + std::to_string(kMaxQubits) +
                                   " qubits, got " + std::to_string(n_qubits));
  }
  return Eigen::Index{1} << n_qubits;
}

int qubits_of(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if ((Eigen::Index{1} << n) == dim) {
      return n;
    }
  }
  throw Error("qubit_count", "dimension " + std::to_string(dim) +
                                 " is not 2^n for 1 <= n <= " +
                                 std::to_string(kMaxQubits));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  n_ = qubits_of(amps_.size());
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw Error("pure_state_norm",
                "amplitude norm deviates from 1 by " + std::to_string(norm - 1.0));
  }
}

PureState::PureState() : amps_(CVector::Unit(2, 0)), n_(1) {}

PureState PureState::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error("pure_state_norm", "cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int n_qubits, Eigen::Index index) {
  const Eigen::Index dim = dimension_of(n_qubits);
  if (index < 0 || index >= dim) {
    throw Error("basis_index", "index out of range");
  }
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------
// HermitianOperator

double hermitian_asymmetry(const CMatrix &a) {
  if (a.rows() != a.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const CMatrix &matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw Error("hermitian", "operator matrix must be square");
  }
  n_ = qubits_of(matrix.rows());
  const double asym = hermitian_asymmetry(matrix);
  if (!(asym <= kHermitianTolerance)) {
    throw Error("hermitian", "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  m_ = 0.5 * (matrix + matrix.adjoint());
}

HermitianOperator HermitianOperator::identity(int n_qubits) {
  const auto dim = dimension_of(n_qubits);
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int n_qubits) {
  const auto dim = dimension_of(n_qubits);
  return HermitianOperator(CMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator &other) const {
  if (other.n_ != n_) {
    throw Error("dimension", "operator sizes differ");
  }
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator &other) const {
  if (other.n_ != n_) {
    throw Error("dimension", "operator sizes differ");
  }
  return HermitianOperator(m_ - other.m_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  return HermitianOperator(m_ * scale);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const CMatrix &matrix) {
  const HermitianOperator herm(matrix);
  m_ = herm.matrix();
  n_ = herm.n_qubits();
  const double trace = m_.trace().real();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw Error("density_trace", "trace deviates from 1 by " + std::to_string(trace - 1.0));
  }
  spectrum_ = eigh(herm);
  if (spectrum_.values[0] < -kPositivityTolerance) {
    throw Error("density_positive",
                "negative eigenvalue " + std::to_string(spectrum_.values[0]));
  }
  const Eigen::Index dim = m_.rows();
  rank_ = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (spectrum_.values[i] > kRankTolerance) {
      ++rank_;
    }
  }
  range_.resize(dim, rank_);
  range_values_.resize(rank_);
  for (int k = 0; k < rank_; ++k) {
    range_.col(k) = spectrum_.vectors.col(dim - 1 - k);
    range_values_[k] = spectrum_.values[dim - 1 - k];
  }
}

// ---------------------------------------------------------------------------
// ProductState

ProductState::ProductState() : factors_{Eigen::Vector2cd(1.0, 0.0)} {}

ProductState::ProductState(std::vector<Eigen::Vector2cd> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty() || static_cast<int>(factors_.size()) > kMaxQubits) {
    throw Error("qubit_count", "product state needs 1.." + std::to_string(kMaxQubits) +
                                   " factors");
  }
  for (const auto &f : factors_) {
    if (std::abs(f.norm() - 1.0) > kNormTolerance) {
      throw Error("product_factor_norm", "factor is not a unit vector");
    }
  }
}

PureState ProductState::state() const {
  CVector v = factors_[0];
  for (std::size_t k = 1; k < factors_.size(); ++k) {
    v = kron(v, CVector(factors_[k]));
  }
  return PureState::normalized(std::move(v));
}

// ---------------------------------------------------------------------------
// Tensor products and Paulis

CMatrix kron(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector &a, const CVector &b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

PureState kron(const PureState &a, const PureState &b) {
  return PureState::normalized(kron(a.amplitudes(), b.amplitudes()));
}

HermitianOperator kron(const HermitianOperator &a, const HermitianOperator &b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

Eigen::Matrix2cd pauli(char symbol) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (symbol) {
  case 'I':
  case 'i':
    m << 1.0, 0.0, 0.0, 1.0;
    break;
  case 'x':
  case 'X':
    m << 0.0, 1.0, 1.0, 0.0;
    break;
  case 'y':
  case 'Y':
    m << 0.0, -i, i, 0.0;
    break;
  case 'z':
  case 'Z':
    m << 1.0, 0.0, 0.0, -1.0;
    break;
  default:
    throw Error("pauli_symbol", std::string("invalid Pauli symbol '") + symbol + "'");
  }
  return m;
}

HermitianOperator pauli_string(std::string_view symbols) {
  dimension_of(static_cast<int>(symbols.size()));
  CMatrix m = pauli(symbols[0]);
  for (std::size_t k = 1; k < symbols.size(); ++k) {
    m = kron(m, CMatrix(pauli(symbols[k])));
  }
  return HermitianOperator(m);
}

HermitianOperator projector(const PureState &psi) {
  return HermitianOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

EigenDecomposition eigh(const HermitianOperator &a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition eigh(const CMatrix &a) {
  if (a.rows() != a.cols()) {
    throw Error("hermitian", "eigh needs a square matrix");
  }
  const double asym = hermitian_asymmetry(a);
  if (!(asym <= kHermitianTolerance)) {
    throw Error("hermitian", "eigh input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (a + a.adjoint()));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Ensembles and sampling

DensityMatrix ensemble_to_density(std::span<const EnsembleEntry> entries) {
  if (entries.empty()) {
    throw Error("ensemble_weights", "empty ensemble");
  }
  const Eigen::Index dim = entries.front().state.dimension();
  CMatrix rho = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (const auto &e : entries) {
    if (e.weight < 0.0 || !std::isfinite(e.weight)) {
      throw Error("ensemble_weights", "negative or non-finite weight");
    }
    if (e.state.dimension() != dim) {
      throw Error("dimension", "ensemble states differ in dimension");
    }
    total += e.weight;
    rho.noalias() += e.weight * e.state.amplitudes() * e.state.amplitudes().adjoint();
  }
  if (std::abs(total - 1.0) > kTraceTolerance) {
    throw Error("ensemble_weights", "weights sum to " + std::to_string(total));
  }
  return DensityMatrix(rho);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

CVector random_gaussian_vector(Eigen::Index dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

PureState random_pure_state(int n_qubits, std::mt19937_64 &rng) {
  return PureState::normalized(random_gaussian_vector(dimension_of(n_qubits), rng));
}

PureState random_pure_state(int n_qubits, std::uint64_t seed) {
  auto rng = make_rng(seed);
  return random_pure_state(n_qubits, rng);
}

double fidelity(const PureState &a, const PureState &b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

int numerical_rank(const CMatrix &columns, double tol) {
  if (columns.cols() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<CMatrix> svd(columns);
  const RVector &s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) {
    return 0;
  }
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol * s[0]) {
      ++r;
    }
  }
  return r;
}

} // namespace entwit
