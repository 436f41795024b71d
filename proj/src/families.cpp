#include "entwit/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entwit/error.hpp"
#include "entwit/measures.hpp"
#include "entwit/zero_set.hpp"

namespace entwit {

namespace {

void check_unit_interval(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error("parameter_range", std::string(name) + " must lie in [0, 1]");
  }
}

const CMatrix &smolin_projector() {
  // 4 rho_S, the projector onto its range
  static const CMatrix p = [] {
    const HermitianOperator s = pauli_string("IIII") + pauli_string("xxxx") +
                                pauli_string("yyyy") + pauli_string("zzzz");
    return CMatrix(s.matrix() / 4.0);
  }();
  return p;
}

} // namespace

// ---------------------------------------------------------------------------
// Smolin

DensityMatrix smolin_state() { return DensityMatrix(smolin_projector() / 4.0); }

DensityMatrix noisy_smolin(double p) {
  check_unit_interval(p, "p");
  return DensityMatrix((1.0 - p) * smolin_projector() / 4.0 + p * CMatrix::Identity(16, 16) / 16.0);
}

SmolinWitnessParams smolin_params_from_t(double t) {
  check_unit_interval(t, "t");
  if (t == 0.0) {
    return {0.5, -std::numeric_limits<double>::infinity()};
  }
  return {(1.0 - t) / 2.0, (1.0 - 1.0 / t) / 2.0};
}

void check_smolin_params(const SmolinWitnessParams &params) {
  const double a = params.alpha;
  const double b = params.beta;
  if (a == 0.0 && b == 0.0) {
    return;
  }
  if (std::isinf(b) && b < 0.0 && std::abs(a - 0.5) < 1e-10) {
    return;
  }
  if (!(a > 0.0 && b < 0.0) || std::abs(1.0 / a + 1.0 / b - 2.0) > 1e-10) {
    throw Error("smolin_curve", "alpha^-1 + beta^-1 must equal 2 with alpha > 0 > beta");
  }
}

HermitianOperator smolin_operator(double alpha, double beta) {
  const CMatrix &p = smolin_projector();
  return HermitianOperator(alpha * p + beta * (CMatrix::Identity(16, 16) - p));
}

WitnessOperator smolin_witness(const SmolinWitnessParams &params) {
  check_smolin_params(params);
  if (std::isinf(params.beta)) {
    return WitnessOperator(smolin_operator(params.alpha, 0.0), MeasureKind::GeometricMeasure,
                           smolin_state().range_basis());
  }
  return WitnessOperator(smolin_operator(params.alpha, params.beta), MeasureKind::GeometricMeasure);
}

double smolin_expectation(const SmolinWitnessParams &params, double p) {
  if (std::isinf(params.beta)) {
    return p == 0.0 ? params.alpha : -std::numeric_limits<double>::infinity();
  }
  return ((4.0 - 3.0 * p) * params.alpha + 3.0 * p * params.beta) / 4.0;
}

double smolin_eg_analytic(double p) {
  check_unit_interval(p, "p");
  if (p >= 2.0 / 3.0) {
    return 0.0;
  }
  return (2.0 - std::sqrt(3.0 * p * (4.0 - 3.0 * p))) / 4.0;
}

SmolinOptimum optimize_smolin_witness(double p) {
  check_unit_interval(p, "p");
  if (p == 0.0) {
    const auto params = smolin_params_from_t(0.0);
    return {params, 0.0, smolin_expectation(params, 0.0)};
  }
  auto f = [p](double t) { return smolin_expectation(smolin_params_from_t(t), p); };
  auto best = optimize::golden_section_maximize(f, 1e-12, 1.0, 1e-12);
  if (f(1.0) >= best.value) {
    best = {1.0, f(1.0)};
  }
  SmolinWitnessParams params = smolin_params_from_t(best.x);
  if (best.x == 1.0) {
    params = {0.0, 0.0};
  }
  return {params, best.x, smolin_expectation(params, p)};
}

// ---------------------------------------------------------------------------
// Three-qubit states

const GhzFamilyStates &ghz_states() {
  static const GhzFamilyStates s = [] {
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(3.0);
    CVector g = CVector::Zero(8), gb = CVector::Zero(8), w = CVector::Zero(8);
    g[0] = h;
    g[7] = h;
    gb[0] = h;
    gb[7] = -h;
    w[1] = t;
    w[2] = t;
    w[4] = t;
    return GhzFamilyStates{PureState::normalized(g), PureState::normalized(gb),
                           PureState::normalized(w)};
  }();
  return s;
}

DensityMatrix rho_ggi(double p, double q) {
  const double r = 1.0 - p - q;
  if (!(p >= -1e-15 && q >= -1e-15 && r >= -1e-12)) {
    throw Error("physical_region", "need p, q >= 0 and p + q <= 1");
  }
  const auto &s = ghz_states();
  return DensityMatrix(std::max(r, 0.0) * projector(s.ghz).matrix() +
                       std::max(p, 0.0) * projector(s.ghz_bar).matrix() +
                       std::max(q, 0.0) * CMatrix::Identity(8, 8) / 8.0);
}

DensityMatrix rho_gi(double q) { return rho_ggi(0.0, q); }

DensityMatrix rho_gw(double p) {
  check_unit_interval(p, "p");
  const auto &s = ghz_states();
  return DensityMatrix((1.0 - p) * projector(s.ghz).matrix() + p * projector(s.w).matrix());
}

// ---------------------------------------------------------------------------
// SLOCC

Eigen::Matrix2cd sl2_exponential(const double *six) {
  const Complex a(six[0], six[1]);
  const Complex b(six[2], six[3]);
  const Complex c(six[4], six[5]);
  Eigen::Matrix2cd m;
  m << a, b, c, -a;
  const Complex d2 = a * a + b * c;
  const Complex d = std::sqrt(d2);
  const Complex sinhc = std::abs(d) < 1e-4 ? 1.0 + d2 / 6.0 + d2 * d2 / 120.0 : std::sinh(d) / d;
  return std::cosh(d) * Eigen::Matrix2cd::Identity() + sinhc * m;
}

SloccOperator::SloccOperator(std::vector<Eigen::Matrix2cd> factors) : factors_(std::move(factors)) {
  if (factors_.empty() || static_cast<int>(factors_.size()) > kMaxQubits) {
    throw Error("qubit_count", "SLOCC operator needs 1.." + std::to_string(kMaxQubits) + " factors");
  }
  for (const auto &f : factors_) {
    if (std::abs(f.determinant() - 1.0) >= 1e-10) {
      throw Error("slocc_determinant", "every SLOCC factor must have determinant 1");
    }
  }
}

SloccOperator SloccOperator::identity(int n_qubits) {
  dimension_of(n_qubits);
  return SloccOperator(std::vector<Eigen::Matrix2cd>(static_cast<std::size_t>(n_qubits),
                                                     Eigen::Matrix2cd::Identity()));
}

SloccOperator SloccOperator::from_parameters(std::span<const double> params) {
  if (params.empty() || params.size() % 6 != 0) {
    throw Error("parameter_count", "SLOCC parameters come in groups of six");
  }
  std::vector<Eigen::Matrix2cd> f;
  for (std::size_t k = 0; k < params.size(); k += 6) {
    f.push_back(sl2_exponential(params.data() + k));
  }
  return SloccOperator(std::move(f));
}

SloccOperator SloccOperator::random(int n_qubits, std::uint64_t seed, double scale) {
  auto rng = make_rng(seed, 0x51);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> params(static_cast<std::size_t>(6 * n_qubits));
  for (auto &v : params) {
    v = normal(rng);
  }
  return from_parameters(params);
}

SloccOperator SloccOperator::phase_flip() {
  Eigen::Matrix2cd iz;
  iz << Complex(0, 1), 0, 0, Complex(0, -1);
  return SloccOperator({iz, Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity()});
}

CMatrix SloccOperator::matrix() const {
  CMatrix m = factors_[0];
  for (std::size_t k = 1; k < factors_.size(); ++k) {
    m = kron(m, CMatrix(factors_[k]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// mu

MuResult compute_mu(const HermitianOperator &pi, const MuOptions &options) {
  if (pi.n_qubits() != 3) {
    throw Error("measure_qubits", "mu is defined for three-qubit Pi");
  }
  const CMatrix h = projector(ghz_states().ghz).matrix() + pi.matrix();
  MuResult result;
  if (options.mode == MuMode::AllStates) {
    const auto e = eigh(h);
    result.value = e.values[7];
    result.maximizers.push_back(PureState::normalized(e.vectors.col(7)));
    return result;
  }
  std::vector<Eigen::VectorXd> params;
  std::vector<ZeroSetOptimum> found =
      maximize_on_w_orbit(h, options.restarts, options.seed, options.descent, options.warm, &params);
  const std::size_t orbit_count = found.size();
  for (int k = 0; k < 3; ++k) {
    for (auto &z : maximize_across_cut(h, k, std::max(4, options.restarts / 4),
                                       options.seed + 17 + static_cast<std::uint64_t>(k))) {
      found.push_back(std::move(z));
    }
  }
  std::vector<bool> usable(found.size());
  result.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < found.size(); ++i) {
    usable[i] = three_tangle(found[i].state) < 1e-10;
    if (usable[i]) {
      result.value = std::max(result.value, found[i].value);
    }
  }
  if (!std::isfinite(result.value)) {
    throw Error("mu_maximizer", "no W-class optimum with vanishing three-tangle");
  }
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return found[a].value > found[b].value; });
  for (std::size_t i : order) {
    if (!usable[i] || found[i].value < result.value - options.maximizer_window) {
      continue;
    }
    const bool dup = std::any_of(result.maximizers.begin(), result.maximizers.end(),
                                 [&](const PureState &m) { return fidelity(m, found[i].state) > 1.0 - 1e-8; });
    if (!dup) {
      result.maximizers.push_back(found[i].state);
    }
    if (i < orbit_count && result.orbit_params.size() < 8) {
      result.orbit_params.push_back(params[i]);
    }
  }
  return result;
}

void check_pi(const HermitianOperator &pi, double mu) {
  if (pi.n_qubits() != 3) {
    throw Error("measure_qubits", "Pi must act on three qubits");
  }
  if (!(mu < 1.0)) {
    throw Error("mu_range", "mu must be below 1");
  }
  const auto e = eigh(pi);
  if (e.values[0] < -1e-10) {
    throw Error("pi_positive", "Pi must be positive semidefinite");
  }
  if (!(e.values[7] < mu)) {
    throw Error("pi_below_mu", "largest eigenvalue of Pi must be below mu");
  }
  const auto &g = ghz_states().ghz.amplitudes();
  if (std::abs(g.dot(pi.matrix() * g)) > 1e-10) {
    throw Error("pi_ghz_orthogonal", "Tr(Pi pi_GHZ) must vanish");
  }
}

WitnessOperator ghz_witness(const GhzWitnessParams &params, bool verify_mu,
                            const MuOptions &mu_options) {
  if (params.slocc.n_qubits() != 3) {
    throw Error("measure_qubits", "GHZ witnesses act on three qubits");
  }
  check_pi(params.pi, params.mu);
  if (verify_mu) {
    const double mu = compute_mu(params.pi, mu_options).value;
    if (std::abs(mu - params.mu) > 1e-6) {
      throw Error("mu", "supplied mu differs from the recomputed value " + std::to_string(mu));
    }
  }
  const CMatrix o = params.slocc.matrix();
  const CMatrix inner = projector(ghz_states().ghz).matrix() + params.pi.matrix() -
                        params.mu * CMatrix::Identity(8, 8);
  return WitnessOperator(HermitianOperator(o * inner * o.adjoint() / (1.0 - params.mu)),
                         MeasureKind::ExtensiveThreeTangle);
}

WitnessOperator gw_witness_range(double p0) {
  if (!(p0 > 0.0 && p0 <= 1.0)) {
    throw Error("parameter_range", "p0 must lie in (0, 1]");
  }
  const auto &s = ghz_states();
  CMatrix basis(8, 2);
  basis.col(0) = s.ghz.amplitudes();
  basis.col(1) = s.w.amplitudes();
  const HermitianOperator x = projector(s.ghz) - (1.0 / p0 - 1.0) * projector(s.w);
  return WitnessOperator(x, MeasureKind::ExtensiveThreeTangle, basis);
}

double locate_p0(const WitnessSearchOptions &search, double lo, double hi, double tolerance) {
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (verify_membership(gw_witness_range(mid), search).ok) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Layouts

namespace {

constexpr int kSloccParams = 18;

// orthonormal basis of the complement of GHZ: GHZbar, |001>, ..., |110>
const CMatrix &ghz_complement() {
  static const CMatrix c = [] {
    CMatrix m = CMatrix::Zero(8, 7);
    m.col(0) = ghz_states().ghz_bar.amplitudes();
    for (int k = 1; k <= 6; ++k) {
      m(k, k) = 1.0;
    }
    return m;
  }();
  return c;
}

} // namespace

int ghz_parameter_count(const GhzLayout &layout) {
  return kSloccParams + (layout.form == PiForm::Full ? 54 : 6);
}

HermitianOperator pi_from_parameters(std::span<const double> params, const GhzLayout &layout) {
  const CMatrix &c = ghz_complement();
  CMatrix pi = CMatrix::Zero(8, 8);
  if (layout.form == PiForm::Symmetric) {
    if (params.size() != 6) {
      throw Error("parameter_count", "symmetric Pi takes 6 parameters");
    }
    if (layout.dropped < 0 || layout.dropped > 6) {
      throw Error("parameter_range", "dropped projector index must lie in 0..6");
    }
    std::size_t k = 0;
    for (int j = 0; j < 7; ++j) {
      if (j == layout.dropped) {
        continue;
      }
      pi += params[k] * params[k] * c.col(j) * c.col(j).adjoint();
      ++k;
    }
    return HermitianOperator(pi);
  }
  if (params.size() != 54) {
    throw Error("parameter_count", "full Pi takes 54 parameters");
  }
  // traceless Hermitian generator: 6 diagonal + 21 complex off-diagonal entries
  CMatrix g = CMatrix::Zero(7, 7);
  double trace = 0.0;
  for (int i = 0; i < 6; ++i) {
    g(i, i) = params[6 + static_cast<std::size_t>(i)];
    trace += params[6 + static_cast<std::size_t>(i)];
  }
  g(6, 6) = -trace;
  std::size_t k = 12;
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      g(i, j) = Complex(params[k], params[k + 1]);
      g(j, i) = std::conj(g(i, j));
      k += 2;
    }
  }
  const auto e = eigh(g);
  Eigen::VectorXcd phases(7);
  for (int i = 0; i < 7; ++i) {
    phases[i] = std::exp(Complex(0.0, e.values[i]));
  }
  const CMatrix v = e.vectors * phases.asDiagonal() * e.vectors.adjoint();
  const CMatrix cv = c * v;
  for (int i = 0; i < 6; ++i) {
    pi += params[static_cast<std::size_t>(i)] * params[static_cast<std::size_t>(i)] * cv.col(i) *
          cv.col(i).adjoint();
  }
  return HermitianOperator(pi);
}

GhzWitnessParams ghz_params_from_vector(const Eigen::VectorXd &x, const GhzLayout &layout,
                                        const MuOptions &mu_options) {
  if (x.size() != ghz_parameter_count(layout)) {
    throw Error("parameter_count", "parameter vector length does not match the layout");
  }
  std::span<const double> all(x.data(), static_cast<std::size_t>(x.size()));
  SloccOperator o = SloccOperator::from_parameters(all.first(kSloccParams));
  HermitianOperator pi = pi_from_parameters(all.subspan(kSloccParams), layout);
  const double mu = compute_mu(pi, mu_options).value;
  return {std::move(o), std::move(pi), mu};
}

GhzOptimum optimize_ghz_witness(const DensityMatrix &rho, const GhzLayout &layout,
                                const Eigen::VectorXd &x0, const optimize::DescentOptions &descent,
                                const MuOptions &mu_options) {
  if (rho.n_qubits() != 3) {
    throw Error("measure_qubits", "GHZ witnesses act on three qubits");
  }
  auto f = [&](const Eigen::VectorXd &x) {
    const GhzWitnessParams params = ghz_params_from_vector(x, layout, mu_options);
    if (!(eigh(params.pi).values[7] < params.mu) || !(params.mu < 1.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    const CMatrix o = params.slocc.matrix();
    const CMatrix inner = projector(ghz_states().ghz).matrix() + params.pi.matrix() -
                          params.mu * CMatrix::Identity(8, 8);
    return (o * inner * o.adjoint() * rho.matrix()).trace().real() / (1.0 - params.mu);
  };
  auto res = optimize::maximize(f, x0, descent);
  return {res.x, res.value};
}

// ---------------------------------------------------------------------------
// Symmetries

namespace {

CMatrix permutation_matrix(const std::array<int, 3> &perm) {
  CMatrix m = CMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const int bits[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
    const int j = (bits[perm[0]] << 2) | (bits[perm[1]] << 1) | bits[perm[2]];
    m(j, i) = 1.0;
  }
  return m;
}

CMatrix phase_rotation(double a, double b) {
  CMatrix m = CMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    const double phase = ((i >> 2) & 1) * a + ((i >> 1) & 1) * b - (i & 1) * (a + b);
    m(i, i) = std::exp(Complex(0.0, phase));
  }
  return m;
}

} // namespace

std::vector<SymmetryOp> symmetry_group(const std::string &label, int phase_grid) {
  std::vector<SymmetryOp> perms, flips, phases;
  std::array<int, 3> perm{0, 1, 2};
  do {
    perms.push_back({permutation_matrix(perm), "perm(" + std::to_string(perm[0]) + "," +
                                                   std::to_string(perm[1]) + "," +
                                                   std::to_string(perm[2]) + ")"});
  } while (std::next_permutation(perm.begin(), perm.end()));
  flips.push_back({CMatrix::Identity(8, 8), "id"});
  flips.push_back({pauli_string("xxx").matrix(), "flip"});
  if (phase_grid < 1) {
    throw Error("parameter_range", "phase grid must be positive");
  }
  for (int a = 0; a < phase_grid; ++a) {
    for (int b = 0; b < phase_grid; ++b) {
      const double step = 2.0 * std::numbers::pi / phase_grid;
      phases.push_back({phase_rotation(a * step, b * step),
                        "phase(" + std::to_string(a) + "," + std::to_string(b) + ")"});
    }
  }
  if (label == "permutation") {
    return perms;
  }
  if (label == "flip") {
    return flips;
  }
  if (label == "phase") {
    return phases;
  }
  if (label != "all") {
    throw Error("symmetry_label", "unknown symmetry group " + label);
  }
  std::vector<SymmetryOp> all;
  for (const auto &p : perms) {
    for (const auto &f : flips) {
      for (const auto &u : phases) {
        all.push_back({p.unitary * f.unitary * u.unitary, p.label + "*" + f.label + "*" + u.label});
      }
    }
  }
  return all;
}

bool check_pi_symmetry(const HermitianOperator &pi, const std::vector<SymmetryOp> &group) {
  return commuting_symmetries(pi, group).size() == group.size();
}

std::vector<SymmetryOp> commuting_symmetries(const HermitianOperator &x,
                                             const std::vector<SymmetryOp> &group) {
  std::vector<SymmetryOp> out;
  for (const auto &g : group) {
    if (g.unitary.rows() != x.dimension()) {
      throw Error("dimension_mismatch", "symmetry and operator dimensions differ");
    }
    if ((g.unitary * x.matrix() * g.unitary.adjoint() - x.matrix()).cwiseAbs().maxCoeff() < 1e-10) {
      out.push_back(g);
    }
  }
  return out;
}

std::vector<PureState> symmetry_images(const std::vector<PureState> &states,
                                       const std::vector<SymmetryOp> &group, double dedup) {
  std::vector<PureState> out;
  auto add = [&](PureState s) {
    for (const auto &o : out) {
      if (fidelity(o, s) > 1.0 - dedup) {
        return;
      }
    }
    out.push_back(std::move(s));
  };
  for (const auto &s : states) {
    add(s);
  }
  for (const auto &s : states) {
    for (const auto &g : group) {
      add(PureState::normalized(g.unitary * s.amplitudes()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// rho_GGI

MuCurve::MuCurve(MuOptions options) : options_(std::move(options)) {}

const MuResult &MuCurve::at(double lambda) {
  if (auto it = cache_.find(lambda); it != cache_.end()) {
    return it->second;
  }
  MuOptions opts = options_;
  auto hi = cache_.lower_bound(lambda);
  if (hi != cache_.end()) {
    for (const auto &p : hi->second.orbit_params) {
      opts.warm.push_back(p);
    }
  }
  if (hi != cache_.begin()) {
    for (const auto &p : std::prev(hi)->second.orbit_params) {
      opts.warm.push_back(p);
    }
  }
  const HermitianOperator pi = lambda * projector(ghz_states().ghz_bar);
  return cache_.emplace(lambda, compute_mu(pi, opts)).first->second;
}

namespace {

CMatrix branch_operator(int branch) {
  return branch == 0 ? CMatrix(CMatrix::Identity(8, 8)) : SloccOperator::phase_flip().matrix();
}

} // namespace

WitnessOperator ggi_witness(double lambda, int branch, MuCurve &curve) {
  const double mu = curve.at(lambda).value;
  GhzWitnessParams params{branch == 0 ? SloccOperator::identity(3) : SloccOperator::phase_flip(),
                          lambda * projector(ghz_states().ghz_bar), mu};
  return ghz_witness(params, false);
}

CertifyResult certify_ggi(const DensityMatrix &rho, double lambda, int branch, MuCurve &curve,
                          const GgiOptions &options) {
  const WitnessOperator x = ggi_witness(lambda, branch, curve);
  const CMatrix o = branch_operator(branch);
  std::vector<PureState> zero_set;
  for (const auto &m : curve.at(lambda).maximizers) {
    zero_set.push_back(PureState::normalized(o * m.amplitudes()));
  }
  const double value = expectation(x, rho);
  if (value > 0.0) {
    std::vector<PureState> seeds = zero_set;
    seeds.push_back(PureState::normalized(o * ghz_states().ghz.amplitudes()));
    const auto group = commuting_symmetries(x.op(), symmetry_group("all"));
    const auto images = symmetry_images(seeds, group);
    const TightStateSet tight = collect_tight_states(x, images, options.search);
    return certify_optimality(x, rho, tight, options.search.tolerances.certify);
  }
  // T3 = 0: every W-class state is tight for the null witness
  const WitnessOperator null(HermitianOperator::zero(3), MeasureKind::ExtensiveThreeTangle);
  for (int i = 0; i < 8; ++i) {
    zero_set.push_back(PureState::basis(3, i));
  }
  const auto images = symmetry_images(zero_set, symmetry_group("all"));
  const TightStateSet tight = collect_tight_states(null, images, options.search);
  return certify_optimality(null, rho, tight, options.search.tolerances.certify);
}

GgiPoint optimize_ggi_point(double p, double q, MuCurve &curve, const GgiOptions &options) {
  const DensityMatrix rho = rho_ggi(p, q);
  const auto &s = ghz_states();
  const double g = s.ghz.amplitudes().dot(rho.matrix() * s.ghz.amplitudes()).real();
  const double gb = s.ghz_bar.amplitudes().dot(rho.matrix() * s.ghz_bar.amplitudes()).real();
  GgiPoint best;
  best.p = p;
  best.q = q;
  best.expectation = -std::numeric_limits<double>::infinity();
  const int grid = std::max(2, options.lambda_grid);
  for (int branch = 0; branch < 2; ++branch) {
    // Tr(X rho) = (a + b lambda - mu) / (1 - mu)
    const double a = branch == 0 ? g : gb;
    const double b = branch == 0 ? gb : g;
    auto f = [&](double lambda) {
      const double mu = curve.at(lambda).value;
      return (a + b * lambda - mu) / (1.0 - mu);
    };
    int best_i = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      const double v = f(options.lambda_max * i / (grid - 1));
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    const double step = options.lambda_max / (grid - 1);
    const double lo = std::max(0.0, (best_i - 1) * step);
    const double hi = std::min(options.lambda_max, (best_i + 1) * step);
    auto r = optimize::golden_section_maximize(f, lo, hi, options.lambda_tolerance);
    if (best_v > r.value) {
      r = {best_i * step, best_v};
    }
    if (r.value > best.expectation) {
      best.expectation = r.value;
      best.lambda = r.x;
      best.branch = branch;
    }
  }
  best.mu = curve.at(best.lambda).value;
  best.expectation = expectation(ggi_witness(best.lambda, best.branch, curve), rho);
  best.t3 = std::max(0.0, best.expectation);
  if (options.certify) {
    best.certified = certify_ggi(rho, best.lambda, best.branch, curve, options).certified();
  }
  return best;
}

std::vector<GgiPoint> t3_surface_scan(int grid, const GgiOptions &options) {
  if (grid < 2) {
    throw Error("parameter_range", "grid must be at least 2");
  }
  MuCurve curve(options.mu);
  std::vector<GgiPoint> out;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; i + j < grid; ++j) {
      const double p = static_cast<double>(i) / (grid - 1);
      const double q = static_cast<double>(j) / (grid - 1);
      out.push_back(optimize_ggi_point(p, q, curve, options));
    }
  }
  return out;
}

NoiseThreshold ghz_noise_threshold(MuCurve &curve, const GgiOptions &options) {
  auto q0 = [&](double lambda) { return 8.0 * (1.0 - curve.at(lambda).value) / (7.0 - lambda); };
  const auto r = optimize::golden_section_maximize(q0, 0.0, 0.9, options.lambda_tolerance);
  return {r.value, r.x, curve.at(r.x).value};
}

} // namespace entwit
