#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entwit/optimize.hpp"
#include "entwit/qstate.hpp"
#include "entwit/witness.hpp"

namespace entwit {

// ---------------------------------------------------------------------------
// Four-qubit Smolin states and the geometric-measure witness family

/// (I + xxxx + yyyy + zzzz) / 16
DensityMatrix smolin_state();
/// (1 - p) rho_S + p I/16
DensityMatrix noisy_smolin(double p);

/// X = 4 alpha rho_S + beta (I - 4 rho_S). beta = -infinity stands for the
/// limit witness alpha P restricted to the range P of rho_S.
struct SmolinWitnessParams {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = (1 - t)/2, beta = (1 - 1/t)/2; t = 0 gives the range-restricted limit.
SmolinWitnessParams smolin_params_from_t(double t);

/// Throws unless alpha^-1 + beta^-1 = 2 within 1e-10, or alpha = beta = 0.
void check_smolin_params(const SmolinWitnessParams &params);

WitnessOperator smolin_witness(const SmolinWitnessParams &params);

/// Same operator without the curve check, e.g. for perturbation studies.
HermitianOperator smolin_operator(double alpha, double beta);

/// [(4 - 3p) alpha + 3 p beta] / 4
double smolin_expectation(const SmolinWitnessParams &params, double p);

/// [2 - sqrt(3p (4 - 3p))] / 4 for p < 2/3, else 0.
double smolin_eg_analytic(double p);

struct SmolinOptimum {
  SmolinWitnessParams params;
  double t = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of smolin_expectation along the curve.
SmolinOptimum optimize_smolin_witness(double p);

// ---------------------------------------------------------------------------
// Three-qubit states

struct GhzFamilyStates {
  PureState ghz;     // (|000> + |111>)/sqrt2
  PureState ghz_bar; // (|000> - |111>)/sqrt2
  PureState w;       // (|001> + |010> + |100>)/sqrt3
};

const GhzFamilyStates &ghz_states();

/// (1 - p - q) pi_GHZ + p pi_GHZbar + q I/8 on the region p, q, 1-p-q in [0, 1].
DensityMatrix rho_ggi(double p, double q);
DensityMatrix rho_gi(double q);
/// (1 - p) pi_GHZ + p pi_W
DensityMatrix rho_gw(double p);

// ---------------------------------------------------------------------------
// SLOCC operators

/// exp(M) for the traceless M = [[a, b], [c, -a]] with a, b, c given by six
/// reals (re a, im a, re b, im b, re c, im c). Determinant one by construction.
Eigen::Matrix2cd sl2_exponential(const double *six);

class SloccOperator {
public:
  /// Throws unless every factor has |det - 1| < 1e-10.
  explicit SloccOperator(std::vector<Eigen::Matrix2cd> factors);

  static SloccOperator identity(int n_qubits);
  /// 6 reals per qubit, see sl2_exponential.
  static SloccOperator from_parameters(std::span<const double> params);
  /// Factors exp(M) with Gaussian entries of M scaled by `scale`.
  static SloccOperator random(int n_qubits, std::uint64_t seed, double scale = 0.5);
  /// (iZ) (x) I (x) I, which maps GHZ to GHZbar.
  static SloccOperator phase_flip();

  const std::vector<Eigen::Matrix2cd> &factors() const noexcept { return factors_; }
  int n_qubits() const noexcept { return static_cast<int>(factors_.size()); }
  CMatrix matrix() const;

private:
  std::vector<Eigen::Matrix2cd> factors_;
};

// ---------------------------------------------------------------------------
// GHZ witnesses X = O (pi_GHZ + Pi - mu I) O^dagger / (1 - mu)

enum class MuMode {
  WClass,   // maximize over the closure of the W class
  AllStates // largest eigenvalue; a safe overestimate
};

struct MuOptions {
  int restarts = 64;
  std::uint64_t seed = 1;
  MuMode mode = MuMode::WClass;
  optimize::DescentOptions descent{.max_iterations = 3000, .rel_tolerance = 1e-15};
  /// W-orbit parameters tried before the random starts.
  std::vector<Eigen::VectorXd> warm;
  /// Optima within this distance of the maximum are reported as maximizers.
  double maximizer_window = 1e-7;
};

struct MuResult {
  double value = 0.0;
  std::vector<PureState> maximizers;        // distinct, tau3 < 1e-10
  std::vector<Eigen::VectorXd> orbit_params; // W-orbit optima, for warm starts
};

/// mu = max over W-class phi of <phi|pi_GHZ + Pi|phi>, searched on the SLOCC
/// orbit of |W> and on the biseparable states that close it.
MuResult compute_mu(const HermitianOperator &pi, const MuOptions &options = {});

struct GhzWitnessParams {
  SloccOperator slocc;
  HermitianOperator pi;
  double mu = 0.0;
};

/// Throws unless 0 <= Pi, lambda_max(Pi) < mu < 1 and Tr(Pi pi_GHZ) = 0.
void check_pi(const HermitianOperator &pi, double mu);

/// Builds the witness. With verify_mu, mu is recomputed and must agree
/// within 1e-6.
WitnessOperator ghz_witness(const GhzWitnessParams &params, bool verify_mu = true,
                            const MuOptions &mu_options = {});

/// pi_GHZ - (1/p0 - 1) pi_W restricted to span{GHZ, W}.
WitnessOperator gw_witness_range(double p0);

/// Largest p0 for which gw_witness_range(p0) passes verify_membership,
/// by bisection on [lo, hi].
double locate_p0(const WitnessSearchOptions &search, double lo = 0.3, double hi = 0.45,
                 double tolerance = 1e-7);

// ---------------------------------------------------------------------------
// Parameter layouts

enum class PiForm {
  Full,     // 48 eigenvector + 6 eigenvalue parameters on the GHZ complement
  Symmetric // lambda_bar pi_GHZbar + sum lambda_ijk pi_ijk with one term dropped
};

struct GhzLayout {
  PiForm form = PiForm::Symmetric;
  /// Symmetric form: index in {GHZbar, 001, 010, 011, 100, 101, 110} of the
  /// projector left out, which caps the rank of Pi at six.
  int dropped = 6;
};

/// 72 for Full, 24 for Symmetric on three qubits.
int ghz_parameter_count(const GhzLayout &layout);

/// Pi from the non-SLOCC part of the parameter vector. Eigenvalues are the
/// squares of their parameters.
HermitianOperator pi_from_parameters(std::span<const double> params, const GhzLayout &layout);

/// Full parameter vector to witness parameters (mu is computed).
GhzWitnessParams ghz_params_from_vector(const Eigen::VectorXd &x, const GhzLayout &layout,
                                        const MuOptions &mu_options = {});

struct GhzOptimum {
  Eigen::VectorXd x;
  double value = 0.0; // Tr(X rho)
};

/// Local maximization of Tr(X rho) over the layout's parameters from x0,
/// with central-difference gradients. Invalid Pi (lambda_max >= mu) scores -inf.
GhzOptimum optimize_ghz_witness(const DensityMatrix &rho, const GhzLayout &layout,
                                const Eigen::VectorXd &x0, const optimize::DescentOptions &descent,
                                const MuOptions &mu_options = {});

// ---------------------------------------------------------------------------
// Symmetries

struct SymmetryOp {
  CMatrix unitary;
  std::string label;
};

/// "permutation" (qubit permutations), "flip" (identity and xxx),
/// "phase" (U(alpha, beta) on a phase_grid x phase_grid grid of multiples of
/// 2 pi / phase_grid) or "all" (every product of the three).
std::vector<SymmetryOp> symmetry_group(const std::string &label, int phase_grid = 3);

/// |U Pi U^dagger - Pi| < 1e-10 for every element.
bool check_pi_symmetry(const HermitianOperator &pi, const std::vector<SymmetryOp> &group);

/// Elements that leave x invariant.
std::vector<SymmetryOp> commuting_symmetries(const HermitianOperator &x,
                                             const std::vector<SymmetryOp> &group);

/// States followed by all their images U psi (deduplicated).
std::vector<PureState> symmetry_images(const std::vector<PureState> &states,
                                       const std::vector<SymmetryOp> &group,
                                       double dedup = 1e-8);

// ---------------------------------------------------------------------------
// rho_GGI optimization

/// mu(lambda) for Pi = lambda pi_GHZbar with warm-started, cached evaluations.
class MuCurve {
public:
  explicit MuCurve(MuOptions options = {});
  const MuResult &at(double lambda);
  std::size_t size() const noexcept { return cache_.size(); }

private:
  MuOptions options_;
  std::map<double, MuResult> cache_;
};

inline MuOptions ggi_mu_defaults() {
  MuOptions m;
  m.restarts = 24;
  return m;
}

struct GgiOptions {
  MuOptions mu = ggi_mu_defaults();
  double lambda_max = 0.999;
  int lambda_grid = 24;
  double lambda_tolerance = 1e-9;
  bool certify = true;
  WitnessSearchOptions search{};
};

struct GgiPoint {
  double p = 0.0;
  double q = 0.0;
  double t3 = 0.0;          // max(0, Tr(X rho))
  double expectation = 0.0; // Tr(X rho)
  double mu = 0.0;
  double lambda = 0.0;
  int branch = 0;           // 0: O = I, 1: O = phase_flip()
  bool certified = false;
};

/// Best witness of the form X = O (pi_GHZ + lambda pi_GHZbar - mu I) O^dag/(1-mu)
/// for rho_GGI(p, q), optionally certified.
GgiPoint optimize_ggi_point(double p, double q, MuCurve &curve, const GgiOptions &options);

/// Witness for one branch at a given lambda (mu taken from the curve).
WitnessOperator ggi_witness(double lambda, int branch, MuCurve &curve);

/// Tries to certify Tr(X rho) (or T3 = 0 through the null witness when
/// Tr(X rho) <= 0) from the mu maximizers and their symmetry images.
CertifyResult certify_ggi(const DensityMatrix &rho, double lambda, int branch, MuCurve &curve,
                          const GgiOptions &options);

/// Surface over the physical triangle sampled on a grid x grid lattice with
/// spacing 1/(grid - 1); points are ordered by p, then q.
std::vector<GgiPoint> t3_surface_scan(int grid, const GgiOptions &options = {});

struct NoiseThreshold {
  double q0 = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

/// max over lambda of the zero crossing q0(lambda) = 8 (1 - mu) / (7 - lambda)
/// of Tr(X rho_GI(q)).
NoiseThreshold ghz_noise_threshold(MuCurve &curve, const GgiOptions &options = {});

} // namespace entwit
