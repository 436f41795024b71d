#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entwit/error.hpp"
#include "entwit/families.hpp"
#include "entwit/roof.hpp"
#include "entwit/witness.hpp"
#include "oracles.hpp"

using namespace entwit;

namespace {

RoofOptions few(int restarts) {
  RoofOptions o;
  o.restarts = restarts;
  return o;
}

CMatrix random_complex(int rows, int cols, std::uint64_t seed) {
  auto rng = make_rng(seed);
  CMatrix z(rows, cols);
  for (int j = 0; j < cols; ++j) {
    z.col(j) = random_gaussian_vector(rows, rng);
  }
  return z;
}

} // namespace

TEST_CASE("identity isometry gives the eigendecomposition") {
  const DensityMatrix rho = rho_gw(0.3);
  const auto e = hjw_ensemble(rho, CMatrix::Identity(2, 2), MeasureKind::ExtensiveThreeTangle);
  REQUIRE(e.entries.size() == 2);
  CHECK(reconstruction_error(e) < 1e-14);
  CHECK(std::abs(e.entries[0].weight - 0.7) < 1e-12);
  CHECK(std::abs(e.entries[1].weight - 0.3) < 1e-12);
  CHECK(std::abs(e.roof_value - 0.7) < 1e-12);
}

TEST_CASE("mixing by a Hadamard") {
  const DensityMatrix rho = rho_gw(0.5);
  CMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const auto e = hjw_ensemble(rho, h, MeasureKind::ExtensiveThreeTangle);
  REQUIRE(e.entries.size() == 2);
  CHECK(reconstruction_error(e) < 1e-14);
  CHECK(std::abs(e.entries[0].weight - 0.5) < 1e-12);
  // both members are (GHZ +- W)/sqrt2 up to phase
  for (const auto &m : e.entries) {
    CHECK(std::abs(fidelity(m.state, ghz_states().ghz) - 0.5) < 1e-12);
    CHECK(std::abs(fidelity(m.state, ghz_states().w) - 0.5) < 1e-12);
  }
}

TEST_CASE("random isometries reconstruct the state") {
  const DensityMatrix rho = rho_gw(0.2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const CMatrix u = polar_isometry(random_complex(6, 2, seed));
    CHECK((u.adjoint() * u - CMatrix::Identity(2, 2)).norm() < 1e-13);
    const auto e = hjw_ensemble(rho, u, MeasureKind::ExtensiveThreeTangle);
    CHECK(reconstruction_error(e) < 1e-13);
    double total = 0.0;
    for (const auto &m : e.entries) {
      total += m.weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-13);
    CHECK(e.roof_value >= 0.0);
  }
  try {
    hjw_ensemble(rho, CMatrix::Ones(3, 2), MeasureKind::ExtensiveThreeTangle);
    FAIL("expected isometry error");
  } catch (const Error &err) {
    CHECK(err.invariant() == "isometry");
  }
}

TEST_CASE("polar factor is the closest isometry") {
  const CMatrix z = random_complex(5, 3, 9);
  const CMatrix u = polar_isometry(z);
  CHECK((u.adjoint() * u - CMatrix::Identity(3, 3)).norm() < 1e-13);
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const CMatrix v = polar_isometry(random_complex(5, 3, seed));
    CHECK((z - u).norm() <= (z - v).norm() + 1e-12);
  }
}

TEST_CASE("concurrence roof matches Wootters") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DensityMatrix rho(oracle::random_density(4, 2, seed));
    const auto r = convex_roof_minimize(rho, MeasureKind::Concurrence, few(16));
    const double c = oracle::wootters_concurrence(rho.matrix());
    CHECK(std::abs(r.value - c) < 1e-4);
    CHECK(r.value >= c - 1e-9);
    CHECK(reconstruction_error(r.best) < 1e-10);
    CHECK(r.ensemble_size == 4);
  }
}

TEST_CASE("roof of GHZ/W mixtures follows the linear law below p0") {
  const double p0 = oracle::analytic_p0();
  for (double p : {0.1, 0.25}) {
    const auto r = convex_roof_minimize(rho_gw(p), MeasureKind::ExtensiveThreeTangle, few(8));
    CHECK(std::abs(r.value - (1.0 - p / p0)) < 1e-4);
  }
  const auto zero = convex_roof_minimize(rho_gw(0.6), MeasureKind::ExtensiveThreeTangle, few(8));
  CHECK(zero.value < 1e-4);
}

TEST_CASE("larger ensembles do not raise the roof estimate") {
  const DensityMatrix rho(oracle::random_density(4, 2, 77));
  double last = 1e300;
  for (int m : {2, 3, 4, 5}) {
    RoofOptions o = few(8);
    o.ensemble_size = m;
    const auto r = convex_roof_minimize(rho, MeasureKind::Concurrence, o);
    CHECK(r.value <= last + 1e-5);
    last = std::min(last, r.value);
  }
}

TEST_CASE("padding an isometry with a zero row keeps the roof value") {
  const DensityMatrix rho = rho_gw(0.2);
  const CMatrix u = polar_isometry(random_complex(4, 2, 31));
  CMatrix padded = CMatrix::Zero(5, 2);
  padded.topRows(4) = u;
  const auto a = hjw_ensemble(rho, u, MeasureKind::ExtensiveThreeTangle);
  const auto b = hjw_ensemble(rho, padded, MeasureKind::ExtensiveThreeTangle);
  CHECK(std::abs(a.roof_value - b.roof_value) < 1e-12);
}

TEST_CASE("roof is convex on random pairs") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CMatrix r1 = oracle::random_density(4, 2, 200 + seed);
    const CMatrix r2 = oracle::random_density(4, 2, 300 + seed);
    const double l = 0.3;
    const double mixed =
        convex_roof_minimize(DensityMatrix(l * r1 + (1 - l) * r2), MeasureKind::Concurrence, few(8))
            .value;
    const double e1 = convex_roof_minimize(DensityMatrix(r1), MeasureKind::Concurrence, few(8)).value;
    const double e2 = convex_roof_minimize(DensityMatrix(r2), MeasureKind::Concurrence, few(8)).value;
    CHECK(mixed <= l * e1 + (1 - l) * e2 + 2e-3);
  }
}

TEST_CASE("witness lower bounds never exceed the roof") {
  const WitnessOperator x = gw_witness_range(oracle::analytic_p0());
  for (double p : {0.05, 0.15, 0.35, 0.5}) {
    const DensityMatrix rho = rho_gw(p);
    const auto r = convex_roof_minimize(rho, MeasureKind::ExtensiveThreeTangle, few(8));
    CHECK(lower_bound(x, rho) - 1e-4 <= r.value);
    CHECK(reconstruction_error(r.best) < 1e-8);
  }
}

TEST_CASE("geometric measure roof of two qubits") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const DensityMatrix rho(oracle::random_density(4, 2, 100 + seed));
    const double exact = oracle::eg_from_concurrence(oracle::wootters_concurrence(rho.matrix()));
    const auto r = convex_roof_minimize(rho, MeasureKind::GeometricMeasure, few(8));
    CHECK(r.value >= exact - 1e-9);
    CHECK(r.value < exact + 1e-4);
  }
}

TEST_CASE("determinism and json") {
  const DensityMatrix rho(oracle::random_density(4, 2, 5));
  const auto a = convex_roof_minimize(rho, MeasureKind::Concurrence, few(4));
  const auto b = convex_roof_minimize(rho, MeasureKind::Concurrence, few(4));
  CHECK(a.value == b.value);
  const auto doc = ensemble_document(a.best);
  CHECK(doc["entries"].size() == a.best.entries.size());
  CHECK(doc.dump() == ensemble_document(b.best).dump());
}
