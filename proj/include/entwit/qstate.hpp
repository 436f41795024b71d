#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace entwit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxQubits = 4;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-10;

/// 2^n for 1 <= n <= kMaxQubits; throws otherwise.
Eigen::Index dimension_of(int n_qubits);

/// Inverse of dimension_of; throws if dim is not 2^n with 1 <= n <= kMaxQubits.
int qubits_of(Eigen::Index dim);

/// Normalized state vector. The leftmost tensor factor is the most
/// significant bit of the basis index, so |q0 q1 q2> sits at q0*4 + q1*2 + q2.
class PureState {
public:
  /// Single-qubit |0>, a placeholder for default-initialized results.
  PureState();
  /// Throws unless the amplitudes have unit norm within kNormTolerance.
  explicit PureState(CVector amplitudes);

  /// Rescales to unit norm; throws for a zero vector.
  static PureState normalized(CVector amplitudes);
  static PureState basis(int n_qubits, Eigen::Index index);

  const CVector &amplitudes() const noexcept { return amps_; }
  int n_qubits() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return amps_.size(); }
  Complex operator[](Eigen::Index i) const { return amps_[i]; }

private:
  CVector amps_;
  int n_ = 0;
};

/// Hermitian matrix on an n-qubit space. Construction symmetrizes away
/// asymmetry below kHermitianTolerance and rejects anything larger.
class HermitianOperator {
public:
  explicit HermitianOperator(const CMatrix &matrix);

  static HermitianOperator identity(int n_qubits);
  static HermitianOperator zero(int n_qubits);

  const CMatrix &matrix() const noexcept { return m_; }
  int n_qubits() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

  HermitianOperator operator+(const HermitianOperator &other) const;
  HermitianOperator operator-(const HermitianOperator &other) const;
  HermitianOperator operator*(double scale) const;

private:
  CMatrix m_;
  int n_ = 0;
};

inline HermitianOperator operator*(double scale, const HermitianOperator &op) {
  return op * scale;
}

struct EigenDecomposition {
  RVector values;  // ascending
  CMatrix vectors; // orthonormal columns
};

/// Unit-trace positive semidefinite Hermitian matrix with its spectral data.
class DensityMatrix {
public:
  explicit DensityMatrix(const CMatrix &matrix);

  const CMatrix &matrix() const noexcept { return m_; }
  int n_qubits() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

  /// Number of eigenvalues above kRankTolerance.
  int rank() const noexcept { return rank_; }
  /// Orthonormal columns spanning the range, ordered by descending eigenvalue.
  const CMatrix &range_basis() const noexcept { return range_; }
  /// Eigenvalues matching the columns of range_basis().
  const RVector &range_eigenvalues() const noexcept { return range_values_; }
  const EigenDecomposition &spectrum() const noexcept { return spectrum_; }

  HermitianOperator as_operator() const { return HermitianOperator(m_); }

private:
  CMatrix m_;
  int n_ = 0;
  int rank_ = 0;
  EigenDecomposition spectrum_;
  CMatrix range_;
  RVector range_values_;
};

/// Tensor product of single-qubit unit vectors.
class ProductState {
public:
  /// Single-qubit |0>.
  ProductState();
  explicit ProductState(std::vector<Eigen::Vector2cd> factors);

  const std::vector<Eigen::Vector2cd> &factors() const noexcept { return factors_; }
  int n_qubits() const noexcept { return static_cast<int>(factors_.size()); }
  PureState state() const;

private:
  std::vector<Eigen::Vector2cd> factors_;
};

CMatrix kron(const CMatrix &a, const CMatrix &b);
CVector kron(const CVector &a, const CVector &b);
PureState kron(const PureState &a, const PureState &b);
HermitianOperator kron(const HermitianOperator &a, const HermitianOperator &b);

/// Single-qubit Pauli or identity for symbol in {I, x, y, z} (case-insensitive).
Eigen::Matrix2cd pauli(char symbol);

/// Tensor product of Paulis, e.g. "xxxx" or "Izz".
HermitianOperator pauli_string(std::string_view symbols);

/// |psi><psi|
HermitianOperator projector(const PureState &psi);

EigenDecomposition eigh(const HermitianOperator &a);
/// Throws when `a` is not Hermitian within kHermitianTolerance.
EigenDecomposition eigh(const CMatrix &a);

struct EnsembleEntry {
  double weight = 0.0;
  PureState state;
};

/// sum_i w_i |psi_i><psi_i|; weights must be nonnegative and sum to one.
DensityMatrix ensemble_to_density(std::span<const EnsembleEntry> entries);

/// Deterministic generator for a (seed, stream) pair.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Vector of i.i.d. standard complex Gaussians.
CVector random_gaussian_vector(Eigen::Index dim, std::mt19937_64 &rng);

/// Haar-random state, deterministic in `seed`.
PureState random_pure_state(int n_qubits, std::uint64_t seed);
PureState random_pure_state(int n_qubits, std::mt19937_64 &rng);

/// |<a|b>|^2
double fidelity(const PureState &a, const PureState &b);

/// Largest absolute entry of a - a^dagger.
double hermitian_asymmetry(const CMatrix &a);

/// Number of linearly independent columns (singular values above tol relative
/// to the largest).
int numerical_rank(const CMatrix &columns, double tol = 1e-8);

} // namespace entwit
