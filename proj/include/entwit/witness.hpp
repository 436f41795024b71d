#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "entwit/measures.hpp"
#include "entwit/optimize.hpp"
#include "entwit/qstate.hpp"

namespace entwit {

enum class HilbertKind { Full, Range };

/// Hermitian observable X that never exceeds a measure on pure states of its
/// declared space: <psi|X|psi> <= E(psi). Tr(X rho) is then a lower bound of
/// the convex-roof value E(rho), exact when X is optimal for rho.
class WitnessOperator {
public:
  WitnessOperator(HermitianOperator op, MeasureKind measure);
  /// Restricted to the span of the orthonormal columns of range_basis.
  WitnessOperator(HermitianOperator op, MeasureKind measure, CMatrix range_basis);

  /// Restricted to the range of rho.
  static WitnessOperator on_range(HermitianOperator op, MeasureKind measure,
                                  const DensityMatrix &rho);

  const HermitianOperator &op() const noexcept { return op_; }
  MeasureKind measure() const noexcept { return measure_; }
  HilbertKind hilbert() const noexcept { return hilbert_; }
  int n_qubits() const noexcept { return op_.n_qubits(); }

  /// Orthonormal columns spanning the declared space (identity for Full).
  const CMatrix &basis() const noexcept { return basis_; }

  /// True when psi lies in the declared space within tol.
  bool contains(const CVector &psi, double tol = 1e-9) const;

private:
  HermitianOperator op_;
  MeasureKind measure_;
  HilbertKind hilbert_;
  CMatrix basis_;
};

struct Tolerances {
  double membership = 1e-7; // falsifier threshold on max <X> - E
  double tight = 1e-7;      // E(psi) - <psi|X|psi> for tight states
  double certify = 1e-6;    // Frobenius residual of the convex reconstruction
  double dedup = 1e-8;      // states with fidelity > 1 - dedup are identical
};

struct WitnessSearchOptions {
  int samples = 64;   // Haar starting points for the smooth ascent
  int restarts = 200; // starts for the zero-set and product searches
  std::uint64_t seed = 1;
  Tolerances tolerances{};
  ProductOverlapOptions overlap{};
  optimize::DescentOptions descent{.max_iterations = 2000, .rel_tolerance = 1e-13};
};

double expectation(const WitnessOperator &x, const DensityMatrix &rho);
double expectation(const WitnessOperator &x, const PureState &psi);

/// max(0, Tr(X rho)).
double lower_bound(const WitnessOperator &x, const DensityMatrix &rho);

/// <psi|X|psi> - E(psi); positive values falsify membership.
double membership_gap(const WitnessOperator &x, const PureState &psi,
                      const ProductOverlapOptions &overlap = {});

struct EgCondition {
  double value = 0.0;  // max_s lambda_max[X + pi_s] over the declared space
  ProductState product;
  PureState state;     // top eigenvector at the maximizing product state
};

/// Alternating maximization of <psi|X|psi> + |<psi|s>|^2: with s fixed, psi is
/// the top eigenvector of X + pi_s; with psi fixed, s is its best product
/// approximation. The optimum equals max_s lambda_max[X + pi_s], and a
/// geometric-measure witness is valid iff it does not exceed 1.
EgCondition eg_witness_condition(const WitnessOperator &x, const WitnessSearchOptions &options = {});

/// Every local optimum of the eg_witness_condition search, one per restart.
std::vector<EgCondition> eg_condition_optima(const WitnessOperator &x,
                                             const WitnessSearchOptions &options = {});

struct MembershipReport {
  bool ok = false;
  double worst_violation = 0.0;
  PureState worst_state;
};

/// Searches for a pure state with <psi|X|psi> > E(psi). A passing report is
/// evidence, not a proof: the search is multi-start local ascent.
MembershipReport verify_membership(const WitnessOperator &x,
                                   const WitnessSearchOptions &options = {});

struct TightState {
  PureState state;
  double expectation = 0.0; // <psi|X|psi>
  double measure = 0.0;     // E(psi)
  double residual = 0.0;    // E(psi) - <psi|X|psi>
};

struct TightStateSet {
  std::vector<TightState> members;

  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
  std::vector<PureState> states() const;
  /// Number of linearly independent member vectors.
  int independent_count() const;
};

/// Pure states on which X meets the measure, from multi-start searches plus
/// the optional seed states. Deduplicated up to global phase and ordered by
/// descending <psi|X|psi>, then lexicographically by phase-fixed amplitudes.
TightStateSet find_tight_states(const WitnessOperator &x, const WitnessSearchOptions &options = {},
                                std::span<const PureState> seeds = {});

/// Evaluates candidates directly and keeps the tight ones, deduplicated and
/// ordered as in find_tight_states.
TightStateSet collect_tight_states(const WitnessOperator &x, std::span<const PureState> candidates,
                                   const WitnessSearchOptions &options = {});

/// Union of two tight sets with the same ordering and deduplication rules.
TightStateSet merge_tight_sets(const TightStateSet &a, const TightStateSet &b,
                               double dedup_tolerance = 1e-8);

struct OptimalityCertificate {
  TightStateSet ensemble;      // members carrying positive weight
  std::vector<double> weights; // same order as ensemble.members
  double reconstruction_residual = 0.0;
  double value = 0.0;          // Tr(X rho) = E(rho)
  int independent_count = 0;
};

struct CertifyResult {
  std::optional<OptimalityCertificate> certificate;
  double best_residual = 0.0;
  double expectation = 0.0; // Tr(X rho); a lower bound when not certified

  bool certified() const noexcept { return certificate.has_value(); }
};

/// Decides rho in conv(tight states) by nonnegative least squares over the
/// real space of Hermitian matrices. Success requires the reconstruction
/// residual below `tolerance` and at least rank(rho) independent members with
/// positive weight; the certificate is then an optimal decomposition of rho.
CertifyResult certify_optimality(const WitnessOperator &x, const DensityMatrix &rho,
                                 const TightStateSet &tight, double tolerance = 1e-6);

/// JSON: shared operator layout plus "measure", "hilbert" and, for range
/// witnesses, "range_basis" (list of column vectors).
nlohmann::json witness_document(const WitnessOperator &x);
WitnessOperator read_witness(const nlohmann::json &doc);

nlohmann::json certificate_document(const OptimalityCertificate &cert);

} // namespace entwit
