#include "entwit/witness.hpp"

#include <algorithm>
#include <cmath>

#include "entwit/error.hpp"
#include "entwit/io.hpp"
#include "entwit/nnls.hpp"
#include "entwit/zero_set.hpp"

namespace entwit {

namespace {

void check_orthonormal(const CMatrix &b, Eigen::Index dim) {
  if (b.rows() != dim || b.cols() < 1 || b.cols() > dim) {
    throw Error("witness_space", "range basis has the wrong shape");
  }
  const double err =
      (b.adjoint() * b - CMatrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw Error("witness_space", "range basis columns are not orthonormal");
  }
}

} // namespace

WitnessOperator::WitnessOperator(HermitianOperator op, MeasureKind measure)
    : op_(std::move(op)), measure_(measure), hilbert_(HilbertKind::Full),
      basis_(CMatrix::Identity(op_.dimension(), op_.dimension())) {
  check_measure_qubits(measure_, op_.n_qubits());
}

WitnessOperator::WitnessOperator(HermitianOperator op, MeasureKind measure, CMatrix range_basis)
    : op_(std::move(op)), measure_(measure), hilbert_(HilbertKind::Range),
      basis_(std::move(range_basis)) {
  check_measure_qubits(measure_, op_.n_qubits());
  check_orthonormal(basis_, op_.dimension());
}

WitnessOperator WitnessOperator::on_range(HermitianOperator op, MeasureKind measure,
                                          const DensityMatrix &rho) {
  if (rho.dimension() != op.dimension()) {
    throw Error("dimension_mismatch", "witness and state dimensions differ");
  }
  return WitnessOperator(std::move(op), measure, rho.range_basis());
}

bool WitnessOperator::contains(const CVector &psi, double tol) const {
  if (psi.size() != op_.dimension()) {
    return false;
  }
  if (hilbert_ == HilbertKind::Full) {
    return true;
  }
  return (psi - basis_ * (basis_.adjoint() * psi)).norm() <= tol * std::max(1.0, psi.norm());
}

// ---------------------------------------------------------------------------

double expectation(const WitnessOperator &x, const DensityMatrix &rho) {
  if (rho.dimension() != x.op().dimension()) {
    throw Error("dimension_mismatch", "witness and state dimensions differ");
  }
  if (x.hilbert() == HilbertKind::Range) {
    const CMatrix &b = x.basis();
    const CMatrix outside = rho.matrix() - b * (b.adjoint() * rho.matrix());
    if (outside.norm() > 1e-8) {
      throw Error("witness_space", "state has support outside the witness range");
    }
  }
  const Complex t = (x.op().matrix() * rho.matrix()).trace();
  const double scale = 1.0 + x.op().matrix().norm();
  if (std::abs(t.imag()) > 1e-12 * scale) {
    throw Error("hermitian", "Tr(X rho) has an imaginary part");
  }
  return t.real();
}

double expectation(const WitnessOperator &x, const PureState &psi) {
  if (psi.dimension() != x.op().dimension()) {
    throw Error("dimension_mismatch", "witness and state dimensions differ");
  }
  return psi.amplitudes().dot(x.op().matrix() * psi.amplitudes()).real();
}

double lower_bound(const WitnessOperator &x, const DensityMatrix &rho) {
  return std::max(0.0, expectation(x, rho));
}

double membership_gap(const WitnessOperator &x, const PureState &psi,
                      const ProductOverlapOptions &overlap) {
  if (!x.contains(psi.amplitudes(), 1e-8)) {
    throw Error("witness_space", "state lies outside the witness space");
  }
  return expectation(x, psi) - pure_measure(x.measure(), psi, overlap);
}

// ---------------------------------------------------------------------------
// E_G condition

namespace {

ProductState random_product(int n, std::mt19937_64 &rng) {
  std::vector<Eigen::Vector2cd> f;
  for (int k = 0; k < n; ++k) {
    f.push_back(random_gaussian_vector(2, rng).normalized());
  }
  return ProductState(std::move(f));
}

EgCondition eg_alternating(const CMatrix &xr, const CMatrix &basis, ProductState s,
                           int max_iterations) {
  const Eigen::Index r = basis.cols();
  double value = -std::numeric_limits<double>::infinity();
  CVector psi;
  for (int it = 0; it < max_iterations; ++it) {
    const CVector u = basis.adjoint() * s.state().amplitudes();
    const CMatrix m = xr + u * u.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    const double next = es.eigenvalues()[r - 1];
    psi = basis * es.eigenvectors().col(r - 1);
    const bool done = next - value < 1e-14;
    value = std::max(value, next);
    if (done) {
      break;
    }
    s = refine_product_overlap(psi, s, 50, 1e-15).state;
  }
  return EgCondition{value, std::move(s), PureState::normalized(psi)};
}

} // namespace

std::vector<EgCondition> eg_condition_optima(const WitnessOperator &x,
                                             const WitnessSearchOptions &options) {
  if (x.measure() != MeasureKind::GeometricMeasure) {
    throw Error("measure_kind", "the E_G condition needs a geometric-measure witness");
  }
  const CMatrix &b = x.basis();
  const CMatrix xr = b.adjoint() * x.op().matrix() * b;
  const int n = x.n_qubits();
  const int restarts = std::max(1, options.restarts);
  std::vector<std::optional<EgCondition>> slots(static_cast<std::size_t>(restarts));
  optimize::parallel_for(slots.size(), [&](std::size_t idx) {
    auto rng = make_rng(options.seed, idx);
    ProductState s = random_product(n, rng);
    if (idx == 0) {
      // start from the product state closest to the top eigenvector of X
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (xr + xr.adjoint()));
      const CVector top = b * es.eigenvectors().col(b.cols() - 1);
      s = max_product_overlap(top, options.overlap).state;
    }
    slots[idx] = eg_alternating(xr, b, std::move(s), 5000);
  });
  std::vector<EgCondition> out;
  for (auto &s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

EgCondition eg_witness_condition(const WitnessOperator &x, const WitnessSearchOptions &options) {
  auto optima = eg_condition_optima(x, options);
  std::size_t best = 0;
  for (std::size_t i = 1; i < optima.size(); ++i) {
    if (optima[i].value > optima[best].value) {
      best = i;
    }
  }
  return std::move(optima[best]);
}

// ---------------------------------------------------------------------------
// Membership

namespace {

PureState from_real_coordinates(const CMatrix &basis, const Eigen::VectorXd &c) {
  const Eigen::Index r = basis.cols();
  CVector z(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    z[i] = Complex(c[i], c[r + i]);
  }
  return PureState::normalized(basis * z);
}

struct Candidate {
  PureState state;
  double gap;
};

// Smooth local ascent of <psi|X|psi> - E(psi) from Haar samples in the span
// of the witness basis.
std::vector<Candidate> ascend_gap(const WitnessOperator &x, const WitnessSearchOptions &options) {
  const CMatrix &b = x.basis();
  const Eigen::Index r = b.cols();
  std::vector<std::optional<Candidate>> slots(static_cast<std::size_t>(std::max(0, options.samples)));
  optimize::parallel_for(slots.size(), [&](std::size_t idx) {
    auto rng = make_rng(options.seed + 0x5eed, idx);
    const CVector z = random_gaussian_vector(r, rng);
    Eigen::VectorXd c0(2 * r);
    c0 << z.real(), z.imag();
    auto f = [&](const Eigen::VectorXd &c) {
      if (c.norm() < 1e-12) {
        return -1e300;
      }
      const PureState psi = from_real_coordinates(b, c);
      return expectation(x, psi) - pure_measure(x.measure(), psi, options.overlap);
    };
    auto normalize = [](Eigen::VectorXd &c) { c /= std::max(c.norm(), 1e-300); };
    optimize::DescentOptions d = options.descent;
    d.max_iterations = std::min(d.max_iterations, 500);
    auto res = optimize::maximize(f, c0, d, {}, normalize);
    slots[idx] = Candidate{from_real_coordinates(b, res.x), res.value};
  });
  std::vector<Candidate> out;
  for (auto &s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

std::vector<Candidate> gap_candidates(const WitnessOperator &x,
                                      const WitnessSearchOptions &options) {
  std::vector<Candidate> out;
  if (x.measure() == MeasureKind::GeometricMeasure) {
    for (auto &opt : eg_condition_optima(x, options)) {
      out.push_back({std::move(opt.state), opt.value - 1.0});
    }
    return out;
  }
  for (auto &z : maximize_on_zero_set(x.op().matrix(), x.measure(), x.basis(), options.restarts,
                                      options.seed, options.descent)) {
    // on the zero set the gap is the expectation itself
    out.push_back({std::move(z.state), z.value});
  }
  for (auto &c : ascend_gap(x, options)) {
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace

MembershipReport verify_membership(const WitnessOperator &x, const WitnessSearchOptions &options) {
  auto candidates = gap_candidates(x, options);
  MembershipReport report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (auto &c : candidates) {
    // re-evaluate with the full measure so that approximate zero-set points
    // are not trusted blindly
    const double gap = x.measure() == MeasureKind::GeometricMeasure
                           ? c.gap
                           : expectation(x, c.state) - pure_measure(x.measure(), c.state);
    if (gap > report.worst_violation) {
      report.worst_violation = gap;
      report.worst_state = c.state;
    }
  }
  report.ok = report.worst_violation <= options.tolerances.membership;
  return report;
}

// ---------------------------------------------------------------------------
// Tight states

std::vector<PureState> TightStateSet::states() const {
  std::vector<PureState> out;
  out.reserve(members.size());
  for (const auto &m : members) {
    out.push_back(m.state);
  }
  return out;
}

int TightStateSet::independent_count() const {
  if (members.empty()) {
    return 0;
  }
  CMatrix cols(members.front().state.dimension(), static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = members[i].state.amplitudes();
  }
  return numerical_rank(cols);
}

namespace {

// largest amplitude made real and positive
CVector phase_fixed(const CVector &v) {
  Eigen::Index k = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best + 1e-9) {
      best = std::abs(v[i]);
      k = i;
    }
  }
  return v * (std::abs(v[k]) / v[k]);
}

void canonicalize(std::vector<TightState> &members, double dedup) {
  struct Keyed {
    long long key;
    CVector fixed;
    TightState member;
  };
  std::vector<Keyed> keyed;
  for (auto &m : members) {
    CVector f = phase_fixed(m.state.amplitudes());
    TightState t{PureState::normalized(f), m.expectation, m.measure, m.residual};
    keyed.push_back({std::llround(m.expectation * 1e9), std::move(f), std::move(t)});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed &a, const Keyed &b) {
    if (a.key != b.key) {
      return a.key > b.key;
    }
    for (Eigen::Index i = 0; i < a.fixed.size(); ++i) {
      if (a.fixed[i].real() != b.fixed[i].real()) {
        return a.fixed[i].real() < b.fixed[i].real();
      }
      if (a.fixed[i].imag() != b.fixed[i].imag()) {
        return a.fixed[i].imag() < b.fixed[i].imag();
      }
    }
    return false;
  });
  members.clear();
  for (auto &k : keyed) {
    const bool dup = std::any_of(members.begin(), members.end(), [&](const TightState &m) {
      return fidelity(m.state, k.member.state) > 1.0 - dedup;
    });
    if (!dup) {
      members.push_back(std::move(k.member));
    }
  }
}

} // namespace

TightStateSet collect_tight_states(const WitnessOperator &x, std::span<const PureState> candidates,
                                   const WitnessSearchOptions &options) {
  std::vector<std::optional<TightState>> slots(candidates.size());
  optimize::parallel_for(candidates.size(), [&](std::size_t i) {
    const PureState &psi = candidates[i];
    if (psi.dimension() != x.op().dimension() || !x.contains(psi.amplitudes(), 1e-8)) {
      return;
    }
    const double ev = expectation(x, psi);
    const double e = pure_measure(x.measure(), psi, options.overlap);
    const double residual = e - ev;
    if (std::abs(residual) < options.tolerances.tight) {
      slots[i] = TightState{psi, ev, e, residual};
    }
  });
  TightStateSet set;
  for (auto &s : slots) {
    if (s) {
      set.members.push_back(std::move(*s));
    }
  }
  canonicalize(set.members, options.tolerances.dedup);
  return set;
}

TightStateSet find_tight_states(const WitnessOperator &x, const WitnessSearchOptions &options,
                                std::span<const PureState> seeds) {
  std::vector<PureState> candidates(seeds.begin(), seeds.end());
  // eigenvectors of X inside the declared space are cheap candidates; the
  // top one is often tight (e.g. the Bell state for 2 pi_Bell - I)
  const CMatrix &b = x.basis();
  const auto spec = eigh(CMatrix(b.adjoint() * x.op().matrix() * b));
  for (Eigen::Index k = 0; k < spec.vectors.cols(); ++k) {
    candidates.push_back(PureState::normalized(b * spec.vectors.col(k)));
  }
  for (auto &c : gap_candidates(x, options)) {
    if (c.gap > -10.0 * options.tolerances.tight) {
      candidates.push_back(std::move(c.state));
    }
  }
  return collect_tight_states(x, candidates, options);
}

TightStateSet merge_tight_sets(const TightStateSet &a, const TightStateSet &b,
                               double dedup_tolerance) {
  TightStateSet out;
  out.members = a.members;
  out.members.insert(out.members.end(), b.members.begin(), b.members.end());
  canonicalize(out.members, dedup_tolerance);
  return out;
}

// ---------------------------------------------------------------------------
// Certification

CertifyResult certify_optimality(const WitnessOperator &x, const DensityMatrix &rho,
                                 const TightStateSet &tight, double tolerance) {
  CertifyResult result;
  result.expectation = expectation(x, rho);
  result.best_residual = std::numeric_limits<double>::infinity();
  if (tight.empty()) {
    return result;
  }
  const Eigen::Index dim = rho.dimension();
  const Eigen::Index coords = dim * dim;
  const auto count = static_cast<Eigen::Index>(tight.size());
  Eigen::MatrixXd a(coords + 1, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const CVector &v = tight.members[static_cast<std::size_t>(i)].state.amplitudes();
    if (v.size() != dim) {
      throw Error("dimension_mismatch", "tight state and target dimensions differ");
    }
    a.col(i).head(coords) = hermitian_coordinates(v * v.adjoint());
    a(coords, i) = 1.0;
  }
  Eigen::VectorXd target(coords + 1);
  target.head(coords) = hermitian_coordinates(rho.matrix());
  target[coords] = 1.0;
  const NnlsResult sol = nnls(a, target);

  const double total = sol.x.sum();
  if (!(total > 0.0)) {
    return result;
  }
  const Eigen::VectorXd w = sol.x / total;
  CMatrix recon = CMatrix::Zero(dim, dim);
  OptimalityCertificate cert;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (w[i] > 1e-12) {
      const auto &m = tight.members[static_cast<std::size_t>(i)];
      recon += w[i] * m.state.amplitudes() * m.state.amplitudes().adjoint();
      cert.ensemble.members.push_back(m);
      cert.weights.push_back(w[i]);
    }
  }
  result.best_residual = (recon - rho.matrix()).norm();
  cert.reconstruction_residual = result.best_residual;
  cert.value = result.expectation;
  cert.independent_count = cert.ensemble.independent_count();
  if (result.best_residual < tolerance && cert.independent_count >= rho.rank()) {
    result.certificate = std::move(cert);
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json witness_document(const WitnessOperator &x) {
  nlohmann::json doc = io::operator_document(x.op());
  doc["measure"] = to_string(x.measure());
  doc["hilbert"] = x.hilbert() == HilbertKind::Full ? "full" : "range";
  if (x.hilbert() == HilbertKind::Range) {
    nlohmann::json cols = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.basis().cols(); ++j) {
      cols.push_back(io::to_json(CVector(x.basis().col(j))));
    }
    doc["range_basis"] = cols;
  }
  return doc;
}

WitnessOperator read_witness(const nlohmann::json &doc) {
  if (!doc.is_object() || !doc.contains("measure")) {
    throw Error("file_format", "witness document needs a \"measure\" field");
  }
  HermitianOperator op = io::read_operator(doc);
  const MeasureKind kind = parse_measure(doc.at("measure").get<std::string>());
  const std::string hilbert = doc.value("hilbert", std::string("full"));
  if (hilbert == "full") {
    return WitnessOperator(std::move(op), kind);
  }
  if (hilbert != "range") {
    throw Error("file_format", "hilbert must be \"full\" or \"range\"");
  }
  if (!doc.contains("range_basis") || !doc.at("range_basis").is_array() ||
      doc.at("range_basis").empty()) {
    throw Error("file_format", "range witness needs a non-empty \"range_basis\"");
  }
  const auto &cols = doc.at("range_basis");
  CMatrix b(op.dimension(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const CVector v = io::vector_from_json(cols[j]);
    if (v.size() != op.dimension()) {
      throw Error("file_format", "range basis vector has the wrong length");
    }
    b.col(static_cast<Eigen::Index>(j)) = v;
  }
  return WitnessOperator(std::move(op), kind, std::move(b));
}

nlohmann::json certificate_document(const OptimalityCertificate &cert) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < cert.weights.size(); ++i) {
    const auto &m = cert.ensemble.members[i];
    entries.push_back({{"weight", cert.weights[i]},
                       {"measure", m.measure},
                       {"residual", m.residual},
                       {"state", io::state_document(m.state)}});
  }
  return {{"value", cert.value},
          {"reconstruction_residual", cert.reconstruction_residual},
          {"independent_count", cert.independent_count},
          {"entries", entries}};
}

} // namespace entwit
