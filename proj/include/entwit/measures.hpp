#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "entwit/qstate.hpp"

namespace entwit {

enum class MeasureKind {
  GeometricMeasure,     // E_G, any qubit count
  ExtensiveThreeTangle, // T3 = sqrt(tau3), three qubits only
  Concurrence,          // two qubits only
};

std::string to_string(MeasureKind kind);

/// Accepts "eg"/"geometric", "t3"/"three-tangle", "concurrence"/"c".
MeasureKind parse_measure(std::string_view name);

/// Throws unless the measure is defined for n_qubits.
void check_measure_qubits(MeasureKind kind, int n_qubits);

struct ProductOverlapOptions {
  int restarts = 32;
  std::uint64_t seed = 1;
  int max_sweeps = 500;
  double tolerance = 1e-12;
};

struct ProductOverlap {
  double value = 0.0; // |<s|psi>|^2
  ProductState state;
};

/// Best rank-one approximation max_s |<s|psi>|^2 by alternating updates:
/// with all factors but one fixed, the optimal free factor is the normalized
/// partial contraction of psi against the conjugated fixed factors. Restart 0
/// starts from the dominant eigenvectors of the one-qubit reduced states, the
/// others from Haar-random factors. Ties keep the lowest restart index.
/// psi may be unnormalized; the value then scales with <psi|psi>.
ProductOverlap max_product_overlap(const CVector &psi, const ProductOverlapOptions &options = {});
ProductOverlap max_product_overlap(const PureState &psi, const ProductOverlapOptions &options = {});

/// Alternating updates from a given starting product state (no restarts).
/// The value never decreases along the sweeps.
ProductOverlap refine_product_overlap(const CVector &psi, const ProductState &start,
                                      int max_sweeps = 500, double tolerance = 1e-12);

/// E_G(psi) = 1 - max_s |<s|psi>|^2.
double geometric_measure(const PureState &psi, const ProductOverlapOptions &options = {});

/// Cayley hyperdeterminant d1 - 2 d2 + 4 d3 of the amplitudes a_ijk.
Complex hyperdeterminant(const CVector &a);

/// Holomorphic partial derivatives of hyperdeterminant() w.r.t. each amplitude.
CVector hyperdeterminant_gradient(const CVector &a);

/// tau3 = 4 |hyperdeterminant|. Unnormalized input is rejected unless allowed.
double three_tangle(const CVector &a, bool allow_unnormalized = false);
double three_tangle(const PureState &psi);

/// T3 = sqrt(tau3) evaluated on the raw amplitudes; for unnormalized input this
/// equals <psi|psi> T3(psi/|psi|) since tau3 is homogeneous of degree four.
double extensive_three_tangle(const CVector &a);
double extensive_three_tangle(const PureState &psi);

/// a00 a11 - a01 a10
Complex concurrence_polynomial(const CVector &a);

/// 2 |a00 a11 - a01 a10|, extensive for unnormalized input.
double concurrence_pure(const CVector &a);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence_two_qubit(const DensityMatrix &rho);

/// E(psi) for a normalized state. E_G uses `overlap` for its product search.
double pure_measure(MeasureKind kind, const PureState &psi,
                    const ProductOverlapOptions &overlap = {});

/// <psi|psi> E(psi/|psi|); zero for the zero vector.
double extensive_measure(MeasureKind kind, const CVector &psi,
                         const ProductOverlapOptions &overlap = {});

} // namespace entwit
