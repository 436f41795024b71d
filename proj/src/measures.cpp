#include "entwit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "entwit/error.hpp"

namespace entwit {

std::string to_string(MeasureKind kind) {
  switch (kind) {
  case MeasureKind::GeometricMeasure:
    return "eg";
  case MeasureKind::ExtensiveThreeTangle:
    return "t3";
  case MeasureKind::Concurrence:
    return "concurrence";
  }
  return "unknown";
}

MeasureKind parse_measure(std::string_view name) {
  if (name == "eg" || name == "geometric" || name == "e_g") {
    return MeasureKind::GeometricMeasure;
  }
  if (name == "t3" || name == "three-tangle" || name == "extensive-three-tangle") {
    return MeasureKind::ExtensiveThreeTangle;
  }
  if (name == "concurrence" || name == "c") {
    return MeasureKind::Concurrence;
  }
  throw Error("measure_kind", "unknown measure \"" + std::string(name) + "\"");
}

void check_measure_qubits(MeasureKind kind, int n_qubits) {
  if (kind == MeasureKind::ExtensiveThreeTangle && n_qubits != 3) {
    throw Error("measure_qubits", "three-tangle needs exactly 3 qubits");
  }
  if (kind == MeasureKind::Concurrence && n_qubits != 2) {
    throw Error("measure_qubits", "concurrence needs exactly 2 qubits");
  }
  dimension_of(n_qubits);
}

// ---------------------------------------------------------------------------
// Product overlap

namespace {

int bit_of(Eigen::Index index, int qubit, int n) {
  return static_cast<int>((index >> (n - 1 - qubit)) & 1);
}

// Contraction of psi against conj(s_j) for all j != k.
Eigen::Vector2cd partial_contraction(const CVector &psi,
                                     const std::vector<Eigen::Vector2cd> &factors, int k) {
  const int n = static_cast<int>(factors.size());
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Complex w = psi[i];
    for (int j = 0; j < n; ++j) {
      if (j != k) {
        w *= std::conj(factors[j][bit_of(i, j, n)]);
      }
    }
    v[bit_of(i, k, n)] += w;
  }
  return v;
}

Complex overlap_with(const CVector &psi, const std::vector<Eigen::Vector2cd> &factors) {
  const int n = static_cast<int>(factors.size());
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Complex w = psi[i];
    for (int j = 0; j < n; ++j) {
      w *= std::conj(factors[j][bit_of(i, j, n)]);
    }
    total += w;
  }
  return total;
}

Eigen::Vector2cd random_qubit(std::mt19937_64 &rng) {
  CVector v = random_gaussian_vector(2, rng);
  v.normalize();
  return Eigen::Vector2cd(v);
}

// Dominant eigenvector of the reduced state of qubit k.
Eigen::Vector2cd dominant_local_vector(const CVector &psi, int k, int n) {
  Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Zero();
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - k);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & mask) {
      continue;
    }
    const Complex a0 = psi[i];
    const Complex a1 = psi[i | mask];
    reduced(0, 0) += a0 * std::conj(a0);
    reduced(0, 1) += a0 * std::conj(a1);
    reduced(1, 0) += a1 * std::conj(a0);
    reduced(1, 1) += a1 * std::conj(a1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(reduced);
  Eigen::Vector2cd top = solver.eigenvectors().col(1);
  if (!(top.norm() > 0.0)) {
    top << 1.0, 0.0;
  }
  return top.normalized();
}

struct Sweeps {
  double value;
  std::vector<Eigen::Vector2cd> factors;
};

Sweeps run_sweeps(const CVector &psi, std::vector<Eigen::Vector2cd> factors, int max_sweeps,
                  double tolerance) {
  const int n = static_cast<int>(factors.size());
  double value = std::norm(overlap_with(psi, factors));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double current = value;
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector2cd v = partial_contraction(psi, factors, k);
      const double norm = v.norm();
      if (norm > 0.0) {
        factors[k] = v / norm;
        current = norm * norm;
      }
    }
    const double improvement = current - value;
    value = std::max(value, current);
    if (improvement < tolerance) {
      break;
    }
  }
  return {value, std::move(factors)};
}

} // namespace

ProductOverlap refine_product_overlap(const CVector &psi, const ProductState &start,
                                      int max_sweeps, double tolerance) {
  if (start.n_qubits() != qubits_of(psi.size())) {
    throw Error("dimension", "product state and vector sizes differ");
  }
  Sweeps s = run_sweeps(psi, start.factors(), max_sweeps, tolerance);
  return {s.value, ProductState(std::move(s.factors))};
}

ProductOverlap max_product_overlap(const CVector &psi, const ProductOverlapOptions &options) {
  const int n = qubits_of(psi.size());
  const int restarts = std::max(1, options.restarts);
  std::optional<Sweeps> best;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Eigen::Vector2cd> factors(n);
    if (r == 0) {
      for (int k = 0; k < n; ++k) {
        factors[k] = dominant_local_vector(psi, k, n);
      }
    } else {
      auto rng = make_rng(options.seed, static_cast<std::uint64_t>(r));
      for (int k = 0; k < n; ++k) {
        factors[k] = random_qubit(rng);
      }
    }
    Sweeps s = run_sweeps(psi, std::move(factors), options.max_sweeps, options.tolerance);
    if (!best || s.value > best->value) {
      best = std::move(s);
    }
  }
  return {best->value, ProductState(std::move(best->factors))};
}

ProductOverlap max_product_overlap(const PureState &psi, const ProductOverlapOptions &options) {
  return max_product_overlap(psi.amplitudes(), options);
}

double geometric_measure(const PureState &psi, const ProductOverlapOptions &options) {
  const double overlap = max_product_overlap(psi, options).value;
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Three-tangle

namespace {

void require_three_qubits(const CVector &a) {
  if (a.size() != 8) {
    throw Error("measure_qubits", "three-tangle needs an 8-dimensional state");
  }
}

} // namespace

Complex hyperdeterminant(const CVector &a) {
  require_three_qubits(a);
  // a[i*4 + j*2 + k] = a_ijk
  const Complex a000 = a[0], a001 = a[1], a010 = a[2], a011 = a[3];
  const Complex a100 = a[4], a101 = a[5], a110 = a[6], a111 = a[7];
  const Complex d1 = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                     a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
  const Complex d2 = a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010 +
                     a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010 +
                     a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001;
  const Complex d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
  return d1 - 2.0 * d2 + 4.0 * d3;
}

CVector hyperdeterminant_gradient(const CVector &a) {
  require_three_qubits(a);
  const Complex a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
  const Complex a4 = a[4], a5 = a[5], a6 = a[6], a7 = a[7];
  CVector g(8);
  g[0] = 2.0 * a0 * a7 * a7 - 2.0 * (a7 * a3 * a4 + a7 * a5 * a2 + a7 * a6 * a1) +
         4.0 * a6 * a5 * a3;
  g[1] = 2.0 * a1 * a6 * a6 - 2.0 * (a0 * a7 * a6 + a3 * a4 * a6 + a5 * a2 * a6) +
         4.0 * a7 * a2 * a4;
  g[2] = 2.0 * a2 * a5 * a5 - 2.0 * (a0 * a7 * a5 + a3 * a4 * a5 + a5 * a6 * a1) +
         4.0 * a7 * a1 * a4;
  g[3] = 2.0 * a3 * a4 * a4 - 2.0 * (a0 * a7 * a4 + a4 * a5 * a2 + a4 * a6 * a1) +
         4.0 * a0 * a6 * a5;
  g[4] = 2.0 * a4 * a3 * a3 - 2.0 * (a0 * a7 * a3 + a3 * a5 * a2 + a3 * a6 * a1) +
         4.0 * a7 * a1 * a2;
  g[5] = 2.0 * a5 * a2 * a2 - 2.0 * (a0 * a7 * a2 + a3 * a4 * a2 + a2 * a6 * a1) +
         4.0 * a0 * a6 * a3;
  g[6] = 2.0 * a6 * a1 * a1 - 2.0 * (a0 * a7 * a1 + a3 * a4 * a1 + a5 * a2 * a1) +
         4.0 * a0 * a5 * a3;
  g[7] = 2.0 * a7 * a0 * a0 - 2.0 * (a0 * a3 * a4 + a0 * a5 * a2 + a0 * a6 * a1) +
         4.0 * a1 * a2 * a4;
  return g;
}

double three_tangle(const CVector &a, bool allow_unnormalized) {
  require_three_qubits(a);
  if (!allow_unnormalized && std::abs(a.norm() - 1.0) > kNormTolerance) {
    throw Error("pure_state_norm", "three_tangle of an unnormalized vector");
  }
  return 4.0 * std::abs(hyperdeterminant(a));
}

double three_tangle(const PureState &psi) { return three_tangle(psi.amplitudes()); }

double extensive_three_tangle(const CVector &a) {
  return std::sqrt(three_tangle(a, /*allow_unnormalized=*/true));
}

double extensive_three_tangle(const PureState &psi) {
  return extensive_three_tangle(psi.amplitudes());
}

// ---------------------------------------------------------------------------
// Concurrence

Complex concurrence_polynomial(const CVector &a) {
  if (a.size() != 4) {
    throw Error("measure_qubits", "concurrence needs a 4-dimensional state");
  }
  return a[0] * a[3] - a[1] * a[2];
}

double concurrence_pure(const CVector &a) { return 2.0 * std::abs(concurrence_polynomial(a)); }

double concurrence_two_qubit(const DensityMatrix &rho) {
  if (rho.n_qubits() != 2) {
    throw Error("measure_qubits", "concurrence needs a two-qubit state");
  }
  const CMatrix yy = kron(CMatrix(pauli('y')), CMatrix(pauli('y')));
  // The lambdas are the singular values of W^T (y x y) W for W = V sqrt(D);
  // going through singular values avoids square roots of rounding noise.
  const CMatrix w = rho.range_basis() * rho.range_eigenvalues().cwiseSqrt().asDiagonal();
  const CMatrix t = w.transpose() * yy * w;
  RVector lambdas = RVector::Zero(4);
  lambdas.head(t.rows()) = Eigen::JacobiSVD<CMatrix>(t).singularValues();
  std::sort(lambdas.data(), lambdas.data() + lambdas.size(), std::greater<>());
  return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

// ---------------------------------------------------------------------------
// Dispatch

double pure_measure(MeasureKind kind, const PureState &psi, const ProductOverlapOptions &overlap) {
  check_measure_qubits(kind, psi.n_qubits());
  switch (kind) {
  case MeasureKind::GeometricMeasure:
    return geometric_measure(psi, overlap);
  case MeasureKind::ExtensiveThreeTangle:
    return extensive_three_tangle(psi);
  case MeasureKind::Concurrence:
    return concurrence_pure(psi.amplitudes());
  }
  return 0.0;
}

double extensive_measure(MeasureKind kind, const CVector &psi,
                         const ProductOverlapOptions &overlap) {
  switch (kind) {
  case MeasureKind::ExtensiveThreeTangle:
    return extensive_three_tangle(psi);
  case MeasureKind::Concurrence:
    return concurrence_pure(psi);
  case MeasureKind::GeometricMeasure: {
    const double norm2 = psi.squaredNorm();
    if (norm2 == 0.0) {
      return 0.0;
    }
    return std::max(0.0, norm2 - max_product_overlap(psi, overlap).value);
  }
  }
  return 0.0;
}

} // namespace entwit
