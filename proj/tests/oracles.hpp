#pragma once

// Reference computations that share no code path with the library's
// optimizers. Only the basic containers and kron/pauli helpers are reused.

#include <cstdint>
#include <random>

#include "entwit/qstate.hpp"

namespace oracle {

using entwit::CMatrix;
using entwit::Complex;
using entwit::CVector;

/// max |<s|psi>|^2 over symmetric product states |a>^n, by a dense (theta, phi)
/// grid followed by local grid refinement. Exact for permutation-symmetric psi.
double symmetric_product_overlap(const CVector &psi, int grid = 400);

/// max over product states by random sampling plus accept-if-better random
/// perturbations with shrinking amplitude.
double sampled_product_overlap(const CVector &psi, int samples, std::uint64_t seed);

/// max_s lambda_max[X + pi_s] by the same sampling scheme over product s.
double sampled_eg_condition(const CMatrix &x, int samples, std::uint64_t seed);

/// Wootters concurrence from the square roots of the eigenvalues of the
/// non-Hermitian rho (y (x) y) rho^* (y (x) y).
double wootters_concurrence(const CMatrix &rho);

/// Closed-form two-qubit E_G of a mixed state from its concurrence.
double eg_from_concurrence(double c);

/// Three-tangle via the monogamy identity 4 det(rho_A) - C_AB^2 - C_AC^2.
double tangle_by_monogamy(const CVector &psi);

/// max <phi|H|phi> over the zero set of the hyperdeterminant, found by
/// eliminating a_111 (Det is quadratic in it) and hill climbing the remaining
/// seven amplitudes with random accept-if-better steps.
struct ZeroSetMax {
  double value;
  double tau3; // of the returned optimum
};
ZeroSetMax eliminated_mu(const CMatrix &h, int restarts, std::uint64_t seed);

/// p0 of the GHZ/W mixture from the zero-tangle superpositions
/// sqrt(s) GHZ - e^{i phi} sqrt(1 - s) W with s/(1-s) = (8 sqrt6 / 9)^(2/3).
double analytic_p0();

/// Uniform superposition states used by several tests.
CVector ghz_vector();
CVector ghz_bar_vector();
CVector w_vector();

/// Random density matrix of the given rank (Wishart-type).
CMatrix random_density(int dim, int rank, std::uint64_t seed);

} // namespace oracle
