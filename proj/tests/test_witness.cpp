#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entwit/error.hpp"
#include "entwit/families.hpp"
#include "entwit/io.hpp"
#include "entwit/witness.hpp"
#include "entwit/zero_set.hpp"
#include "oracles.hpp"

using namespace entwit;

namespace {

PureState ghz() { return PureState::normalized(oracle::ghz_vector()); }
PureState w() { return PureState::normalized(oracle::w_vector()); }

WitnessSearchOptions quick() {
  WitnessSearchOptions o;
  o.samples = 16;
  o.restarts = 48;
  return o;
}

CVector bell() {
  CVector b = CVector::Zero(4);
  b[0] = b[3] = 1.0 / std::sqrt(2.0);
  return b;
}

// 2 pi_Bell - I, a valid concurrence witness tight on cos a |00> + sin a |11>
WitnessOperator bell_witness() {
  const HermitianOperator op = 2.0 * projector(PureState(bell())) - HermitianOperator::identity(2);
  return WitnessOperator(op, MeasureKind::Concurrence);
}

// (pi_GHZ - 3/4 I) / (1/4), the GHZ witness with Pi = 0
WitnessOperator plain_ghz_witness() {
  const HermitianOperator op = 4.0 * projector(ghz()) - 3.0 * HermitianOperator::identity(3);
  return WitnessOperator(op, MeasureKind::ExtensiveThreeTangle);
}

} // namespace

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(WitnessOperator(HermitianOperator::identity(3), MeasureKind::Concurrence), Error);
  CMatrix not_orthonormal = CMatrix::Ones(8, 1);
  CHECK_THROWS_AS(WitnessOperator(HermitianOperator::identity(3), MeasureKind::GeometricMeasure,
                                  not_orthonormal),
                  Error);
  const WitnessOperator r =
      WitnessOperator::on_range(HermitianOperator::identity(3), MeasureKind::GeometricMeasure,
                                rho_gw(0.3));
  CHECK(r.hilbert() == HilbertKind::Range);
  CHECK(r.basis().cols() == 2);
  CHECK(r.contains(ghz().amplitudes()));
  CHECK(r.contains(w().amplitudes()));
  CHECK_FALSE(r.contains(PureState::basis(3, 3).amplitudes()));
}

TEST_CASE("expectations") {
  const WitnessOperator x = plain_ghz_witness();
  CHECK(std::abs(expectation(x, ghz()) - 1.0) < 1e-14);
  CHECK(std::abs(expectation(x, w()) + 3.0) < 1e-14);
  CHECK(std::abs(expectation(x, rho_gw(0.5)) + 1.0) < 1e-14);
  CHECK(lower_bound(x, rho_gw(0.5)) == 0.0);
  CHECK(std::abs(lower_bound(x, rho_gw(0.1)) - 0.6) < 1e-14);

  const WitnessOperator on_ghz(HermitianOperator::identity(3), MeasureKind::ExtensiveThreeTangle,
                               ghz().amplitudes());
  CHECK(std::abs(expectation(on_ghz, DensityMatrix(projector(ghz()).matrix())) - 1.0) < 1e-14);
  try {
    expectation(on_ghz, DensityMatrix(projector(w()).matrix()));
    FAIL("expected witness_space");
  } catch (const Error &e) {
    CHECK(e.invariant() == "witness_space");
  }
}

TEST_CASE("membership gaps") {
  const WitnessOperator twice(2.0 * projector(ghz()), MeasureKind::ExtensiveThreeTangle);
  CHECK(std::abs(membership_gap(twice, ghz()) - 1.0) < 1e-12);
  const auto bad = verify_membership(twice, quick());
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_violation >= 1.0 - 1e-9);

  const WitnessOperator trivial(projector(ghz()) - HermitianOperator::identity(3),
                                MeasureKind::ExtensiveThreeTangle);
  const auto good = verify_membership(trivial, quick());
  CHECK(good.ok);
  CHECK(good.worst_violation <= 0.0);

  const auto ghz_report = verify_membership(plain_ghz_witness(), quick());
  CHECK(ghz_report.ok);
  CHECK(ghz_report.worst_violation < 1e-9);
  CHECK(ghz_report.worst_violation > -1e-6);

  const auto bell_report = verify_membership(bell_witness(), quick());
  CHECK(bell_report.ok);
  CHECK(std::abs(bell_report.worst_violation) < 1e-7);
}

TEST_CASE("geometric measure witness condition") {
  // X = 0 gives max_s lambda_max[pi_s] = 1 exactly
  const WitnessOperator zero(HermitianOperator::zero(3), MeasureKind::GeometricMeasure);
  CHECK(std::abs(eg_witness_condition(zero, quick()).value - 1.0) < 1e-9);

  // c I is invalid for any c > 0
  const WitnessOperator shifted(0.1 * HermitianOperator::identity(3),
                                MeasureKind::GeometricMeasure);
  CHECK(std::abs(eg_witness_condition(shifted, quick()).value - 1.1) < 1e-9);
  CHECK_FALSE(verify_membership(shifted, quick()).ok);

  // against the sampling oracle on random Hermitian X
  auto rng = make_rng(17);
  for (int t = 0; t < 5; ++t) {
    CMatrix a(8, 8);
    for (int i = 0; i < 8; ++i) {
      a.col(i) = random_gaussian_vector(8, rng);
    }
    const CMatrix h = 0.1 * (a + a.adjoint());
    const WitnessOperator x{HermitianOperator(h), MeasureKind::GeometricMeasure};
    const double lib = eg_witness_condition(x, quick()).value;
    const double orc = oracle::sampled_eg_condition(h, 1500, 40 + t);
    CHECK(lib >= orc - 1e-9);
    CHECK(lib < orc + 1e-4);
  }
}

TEST_CASE("tight states and certification") {
  const WitnessOperator x = plain_ghz_witness();
  const std::vector<PureState> seeds{ghz(), w()};
  const TightStateSet collected = collect_tight_states(x, seeds, quick());
  REQUIRE(collected.size() == 1);
  CHECK(fidelity(collected.members[0].state, ghz()) > 1.0 - 1e-12);

  const DensityMatrix pure_ghz(projector(ghz()).matrix());
  const CertifyResult cert = certify_optimality(x, pure_ghz, collected);
  REQUIRE(cert.certified());
  CHECK(std::abs(cert.certificate->value - 1.0) < 1e-12);
  CHECK(cert.certificate->reconstruction_residual < 1e-10);
  CHECK(cert.certificate->independent_count == 1);

  // a rank-two state cannot be built from a single tight state
  const CertifyResult fail = certify_optimality(x, rho_gw(0.2), collected);
  CHECK_FALSE(fail.certified());
  CHECK(fail.best_residual > 1e-3);
  CHECK(std::abs(fail.expectation - 0.2) < 1e-12);
}

TEST_CASE("Bell witness is tight on a one-parameter family") {
  const WitnessOperator x = bell_witness();
  for (double a : {0.0, 0.3, 0.7, 1.2}) {
    CVector v = CVector::Zero(4);
    v[0] = std::cos(a);
    v[3] = std::sin(a);
    CHECK(std::abs(membership_gap(x, PureState(v))) < 1e-12);
  }
  const TightStateSet found = find_tight_states(x, quick());
  CHECK(found.size() >= 2);
  for (const auto &m : found.members) {
    CHECK(std::abs(m.residual) < 1e-7);
  }

  // Werner state: optimal decomposition from Bell-type tight states
  const CMatrix pb = bell() * bell().adjoint();
  const DensityMatrix werner(0.8 * pb + 0.2 * CMatrix::Identity(4, 4) / 4.0);
  CHECK(std::abs(expectation(x, werner) - concurrence_two_qubit(werner)) < 1e-12);
}

TEST_CASE("mixtures of tight states meet the measure on average") {
  const WitnessOperator x = bell_witness();
  auto rng = make_rng(12);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<EnsembleEntry> entries;
    double total = 0.0, average = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double a = 1.5 * uni(rng), phase = 6.0 * uni(rng);
      CVector v = CVector::Zero(4);
      v[0] = std::cos(a);
      v[3] = std::polar(std::sin(a), 0.0);
      entries.push_back({uni(rng) + 0.1, PureState(CVector(std::polar(1.0, phase) * v))});
      total += entries.back().weight;
    }
    for (auto &e : entries) {
      e.weight /= total;
      average += e.weight * concurrence_pure(e.state.amplitudes());
    }
    CHECK(std::abs(expectation(x, ensemble_to_density(entries)) - average) < 1e-12);
  }
}

TEST_CASE("tight set ordering is canonical") {
  const WitnessOperator x = bell_witness();
  std::vector<PureState> seeds;
  for (double a : {0.1, 0.7, 0.4}) {
    CVector v = CVector::Zero(4);
    v[0] = std::cos(a);
    v[3] = std::sin(a);
    seeds.push_back(PureState(v));
    seeds.push_back(PureState(CVector(std::polar(1.0, 0.3) * v)));
  }
  const TightStateSet s = collect_tight_states(x, seeds, quick());
  REQUIRE(s.size() == 3);
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s.members[i - 1].expectation >= s.members[i].expectation - 1e-9);
  }
  std::vector<PureState> reversed(seeds.rbegin(), seeds.rend());
  const TightStateSet t = collect_tight_states(x, reversed, quick());
  REQUIRE(t.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((s.members[i].state.amplitudes() - t.members[i].state.amplitudes()).norm() < 1e-12);
  }
  const TightStateSet merged = merge_tight_sets(s, t);
  CHECK(merged.size() == 3);
}

TEST_CASE("json round trip") {
  const WitnessOperator x = gw_witness_range(0.37);
  const WitnessOperator back = read_witness(witness_document(x));
  CHECK(back.hilbert() == HilbertKind::Range);
  CHECK(back.measure() == MeasureKind::ExtensiveThreeTangle);
  CHECK((back.op().matrix() - x.op().matrix()).norm() == 0.0);
  CHECK((back.basis() - x.basis()).norm() == 0.0);

  const WitnessOperator full = plain_ghz_witness();
  const auto doc = witness_document(full);
  CHECK(doc["hilbert"] == "full");
  CHECK(doc["kind"] == "operator");
  const WitnessOperator fb = read_witness(nlohmann::json::parse(doc.dump()));
  CHECK((fb.op().matrix() - full.op().matrix()).norm() == 0.0);

  auto broken = doc;
  broken["measure"] = "negativity";
  CHECK_THROWS_AS(read_witness(broken), Error);
}

TEST_CASE("W orbit gradient matches finite differences") {
  auto rng = make_rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    CMatrix a(8, 8);
    for (int i = 0; i < 8; ++i) {
      a.col(i) = random_gaussian_vector(8, rng);
    }
    const CMatrix h = a + a.adjoint();
    Eigen::VectorXd p(24);
    for (int i = 0; i < 24; ++i) {
      p[i] = normal(rng);
    }
    const Eigen::VectorXd g = w_orbit_rayleigh_gradient(h, p);
    const Eigen::VectorXd fd =
        optimize::fd_gradient([&](const Eigen::VectorXd &y) { return w_orbit_rayleigh(h, y); }, p,
                              1e-6);
    CHECK((g - fd).norm() < 1e-6 * (1.0 + g.norm()));
    const CVector v = w_orbit_vector(p);
    CHECK(std::abs(hyperdeterminant(v)) < 1e-13 * std::pow(v.squaredNorm(), 2));
  }
}

TEST_CASE("zero-set search reaches the W overlap of GHZ") {
  // max over W-class of |<GHZ|phi>|^2 is 3/4
  const CMatrix h = projector(ghz()).matrix();
  const auto opt = maximize_on_zero_set(h, MeasureKind::ExtensiveThreeTangle,
                                        CMatrix::Identity(8, 8), 16, 1,
                                        {.max_iterations = 3000, .rel_tolerance = 1e-15});
  double best = 0.0;
  for (const auto &o : opt) {
    best = std::max(best, o.value);
    CHECK(three_tangle(o.state) < 1e-8);
  }
  CHECK(std::abs(best - 0.75) < 1e-9);
}
