#pragma once

#include <cstdint>
#include <vector>

#include "entwit/measures.hpp"
#include "entwit/optimize.hpp"
#include "entwit/qstate.hpp"

// Maximization of <psi|H|psi> over the pure states on which a polynomial
// measure vanishes: the closure of the W class for the three-tangle, product
// states for the two-qubit concurrence.
namespace entwit {

struct ZeroSetOptimum {
  PureState state;
  double value = 0.0; // <psi|H|psi>
};

/// Holomorphic polynomial whose modulus defines the measure
/// (hyperdeterminant for T3, a00 a11 - a01 a10 for concurrence).
Complex measure_polynomial(MeasureKind kind, const CVector &psi);
CVector measure_polynomial_gradient(MeasureKind kind, const CVector &psi);

/// Unnormalized (A (x) B (x) C)|W> for 24 real parameters: the real parts of
/// A, B, C (row-major) followed by their imaginary parts.
CVector w_orbit_vector(const Eigen::VectorXd &params);

/// Rayleigh quotient of H on w_orbit_vector(params) and its exact gradient.
double w_orbit_rayleigh(const CMatrix &h, const Eigen::VectorXd &params);
Eigen::VectorXd w_orbit_rayleigh_gradient(const CMatrix &h, const Eigen::VectorXd &params);

/// Local maxima of the Rayleigh quotient over the SLOCC orbit of |W>, one per
/// restart (restart r uses stream r of `seed`). Warm starts, when given, are
/// tried first.
std::vector<ZeroSetOptimum> maximize_on_w_orbit(const CMatrix &h, int restarts,
                                                std::uint64_t seed,
                                                const optimize::DescentOptions &descent,
                                                const std::vector<Eigen::VectorXd> &warm = {},
                                                std::vector<Eigen::VectorXd> *params_out = nullptr);

/// Alternating top-eigenvector search over states |a>_k (x) |b>_rest that are
/// product across the cut between qubit `split` and the remaining qubits.
std::vector<ZeroSetOptimum> maximize_across_cut(const CMatrix &h, int split, int restarts,
                                                std::uint64_t seed);

/// Projected ascent on {Q = 0} intersected with the span of `basis`: the
/// Rayleigh gradient is projected onto the tangent space of the hypersurface
/// and every step is pulled back by Newton iterations on Q.
std::vector<ZeroSetOptimum> maximize_on_variety(const CMatrix &h, MeasureKind kind,
                                                const CMatrix &basis, int restarts,
                                                std::uint64_t seed, int max_iterations = 3000);

/// Newton projection of c (coordinates in `basis`) onto Q = 0, renormalized.
/// Returns false when the iteration hits a singular point or does not converge.
bool project_to_variety(MeasureKind kind, const CMatrix &basis, CVector &c);

/// All zero-set searches that apply to the given space, concatenated.
std::vector<ZeroSetOptimum> maximize_on_zero_set(const CMatrix &h, MeasureKind kind,
                                                 const CMatrix &basis, int restarts,
                                                 std::uint64_t seed,
                                                 const optimize::DescentOptions &descent);

} // namespace entwit
