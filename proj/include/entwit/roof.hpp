#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "entwit/measures.hpp"
#include "entwit/optimize.hpp"
#include "entwit/qstate.hpp"

namespace entwit {

/// Pure-state decomposition of a density matrix with its average measure.
struct DecompositionEnsemble {
  std::vector<EnsembleEntry> entries;
  DensityMatrix target;
  double roof_value = 0.0; // sum_i p_i E(psi_i)
};

/// psi~_i = sum_j U_ij sqrt(lambda_j) |e_j> over the eigenpairs of rho, with
/// weights <psi~_i|psi~_i>. U is m x r with orthonormal columns (r = rank).
/// Entries of zero weight are dropped. roof_value is filled for `measure`.
DecompositionEnsemble hjw_ensemble(const DensityMatrix &rho, const CMatrix &isometry,
                                   MeasureKind measure,
                                   const ProductOverlapOptions &overlap = {});

/// Z (Z^dagger Z)^{-1/2}: the isometry closest to Z in Frobenius norm.
CMatrix polar_isometry(const CMatrix &z);

/// Frobenius distance between the ensemble's mixture and its target.
double reconstruction_error(const DecompositionEnsemble &ensemble);

struct RoofOptions {
  int ensemble_size = 0; // m; 0 means rank + 2
  int restarts = 64;
  std::uint64_t seed = 1;
  optimize::DescentOptions descent{.max_iterations = 2000, .rel_tolerance = 1e-10};
  /// Continuation schedule: the cusp of T3 and C at zero is smoothed with
  /// these widths, in order, before the final descent on the exact measure.
  std::vector<double> smoothing{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  /// Product-overlap restarts per state for E_G objectives.
  ProductOverlapOptions overlap{.restarts = 4};
};

struct RoofResult {
  double value = 0.0;
  DecompositionEnsemble best;
  int restarts_used = 0;
  int ensemble_size = 0;
};

/// Multi-start minimization of sum_i p_i E(psi_i) over m-element
/// decompositions. The isometry is the polar factor of an unconstrained
/// complex m x r matrix; descent uses central-difference gradients and
/// accepts any improving step, after a smoothing continuation for the
/// polynomial measures. Restart 0 starts from the eigendecomposition.
/// The result is an upper bound on the convex roof.
RoofResult convex_roof_minimize(const DensityMatrix &rho, MeasureKind measure,
                                const RoofOptions &options = {});

nlohmann::json ensemble_document(const DecompositionEnsemble &ensemble);

} // namespace entwit
