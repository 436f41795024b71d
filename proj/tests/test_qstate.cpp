#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entwit/error.hpp"
#include "entwit/io.hpp"
#include "entwit/qstate.hpp"
#include "oracles.hpp"

using namespace entwit;

TEST_CASE("kron of basis vectors and Paulis") {
  const CVector z0 = CVector::Unit(2, 0);
  const CVector k = kron(z0, z0);
  CHECK(k.size() == 4);
  CHECK(std::abs(k[0] - 1.0) == 0.0);
  CHECK(k.tail(3).norm() == 0.0);

  const HermitianOperator zz = kron(pauli_string("z"), pauli_string("z"));
  const Eigen::VectorXd d = zz.matrix().diagonal().real();
  CHECK(d[0] == 1.0);
  CHECK(d[1] == -1.0);
  CHECK(d[2] == -1.0);
  CHECK(d[3] == 1.0);
  CHECK((kron(HermitianOperator::identity(1), HermitianOperator::identity(1)).matrix() -
         CMatrix::Identity(4, 4))
            .norm() == 0.0);
}

TEST_CASE("kron is associative and orders the left factor first") {
  auto rng = make_rng(3);
  for (int t = 0; t < 20; ++t) {
    const CVector a = random_gaussian_vector(2, rng);
    const CVector b = random_gaussian_vector(4, rng);
    const CVector c = random_gaussian_vector(2, rng);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() < 1e-14);
  }
  // |q0 q1 q2> = |1 0 0> sits at index 4
  const CVector one = CVector::Unit(2, 1), zero = CVector::Unit(2, 0);
  CHECK(std::abs(kron(kron(one, zero), zero)[4] - 1.0) < 1e-15);
}

TEST_CASE("pauli strings") {
  const auto xxxx = eigh(pauli_string("xxxx"));
  for (int i = 0; i < 16; ++i) {
    CHECK(std::abs(std::abs(xxxx.values[i]) - 1.0) < 1e-12);
  }
  CHECK((pauli_string("IIII").matrix() - CMatrix::Identity(16, 16)).norm() == 0.0);

  // eigenvalues of xxxx + yyyy + zzzz: direct diagonalization gives {3 x4, -1 x12}
  const auto s = eigh(pauli_string("xxxx") + pauli_string("yyyy") + pauli_string("zzzz"));
  int threes = 0, minus = 0;
  for (int i = 0; i < 16; ++i) {
    threes += std::abs(s.values[i] - 3.0) < 1e-10;
    minus += std::abs(s.values[i] + 1.0) < 1e-10;
  }
  CHECK(threes == 4);
  CHECK(minus == 12);
  CHECK_THROWS_AS(pauli_string("xq"), Error);
}

TEST_CASE("projector and eigh") {
  const PureState g = PureState::normalized(oracle::ghz_vector());
  const HermitianOperator p = projector(g);
  CHECK(std::abs(p.matrix().trace() - 1.0) < 1e-14);
  CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-14);
  CHECK(std::abs(p.matrix()(0, 0) - 0.5) < 1e-14);

  const auto e = eigh(pauli_string("z"));
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));

  const auto pe = eigh(p);
  CHECK(std::abs(pe.values[7] - 1.0) < 1e-12);
  CHECK(pe.values.head(7).cwiseAbs().maxCoeff() < 1e-12);

  auto rng = make_rng(11);
  for (int t = 0; t < 1000; ++t) {
    const int dim = 2 << (t % 4);
    CMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      a.col(i) = random_gaussian_vector(dim, rng);
    }
    const CMatrix h = 0.5 * (a + a.adjoint());
    const auto d = eigh(h);
    REQUIRE((h * d.vectors - d.vectors * d.values.asDiagonal()).norm() < 1e-10);
  }
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(bad), Error);
}

TEST_CASE("Hermitian operators symmetrize small drift only") {
  CMatrix m = pauli_string("x").matrix();
  m(0, 1) += 1e-13;
  const HermitianOperator h(m);
  CHECK(hermitian_asymmetry(h.matrix()) == 0.0);
  m(0, 1) += 1e-6;
  CHECK_THROWS_AS(HermitianOperator{m}, Error);
}

TEST_CASE("density matrix invariants and rank") {
  const DensityMatrix rho(CMatrix::Identity(4, 4) / 4.0);
  CHECK(rho.rank() == 4);
  CMatrix notrace = CMatrix::Identity(4, 4) / 3.0;
  CHECK_THROWS_AS(DensityMatrix{notrace}, Error);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, Error);

  // the Smolin state has eigenvalue 1/4 four times
  const CMatrix s = (pauli_string("IIII") + pauli_string("xxxx") + pauli_string("yyyy") +
                     pauli_string("zzzz"))
                        .matrix() /
                    16.0;
  const DensityMatrix smolin(s);
  CHECK(smolin.rank() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(smolin.range_eigenvalues()[i] - 0.25) < 1e-12);
  }
}

TEST_CASE("ensembles") {
  const PureState g = PureState::normalized(oracle::ghz_vector());
  std::vector<EnsembleEntry> one{{1.0, g}};
  CHECK((ensemble_to_density(one).matrix() - projector(g).matrix()).norm() < 1e-15);

  std::vector<EnsembleEntry> two{{0.5, PureState::basis(3, 0)}, {0.5, PureState::basis(3, 7)}};
  CHECK(ensemble_to_density(two).rank() == 2);

  std::vector<EnsembleEntry> all;
  for (int i = 0; i < 8; ++i) {
    all.push_back({1.0 / 8.0, PureState::basis(3, i)});
  }
  CHECK((ensemble_to_density(all).matrix() - CMatrix::Identity(8, 8) / 8.0).norm() < 1e-15);

  std::vector<EnsembleEntry> bad{{0.7, g}, {0.7, g}};
  CHECK_THROWS_AS(ensemble_to_density(bad), Error);
  std::vector<EnsembleEntry> negative{{1.5, g}, {-0.5, g}};
  CHECK_THROWS_AS(ensemble_to_density(negative), Error);
}

TEST_CASE("random pure states") {
  for (std::uint64_t seed = 1; seed < 50; ++seed) {
    CHECK(std::abs(random_pure_state(3, seed).amplitudes().norm() - 1.0) < 1e-12);
  }
  CHECK((random_pure_state(4, 9).amplitudes() - random_pure_state(4, 9).amplitudes()).norm() == 0.0);

  // Haar first moment: E|<0|psi>|^2 = 1/2^n, checked within 3 sigma
  for (int n : {1, 2, 3}) {
    auto rng = make_rng(100 + n);
    const int samples = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double v = std::norm(random_pure_state(n, rng)[0]);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / samples;
    const double sd = std::sqrt((sum2 / samples - mean * mean) / samples);
    CHECK(std::abs(mean - 1.0 / (1 << n)) < 3.0 * sd);
  }
}

TEST_CASE("pure states reject bad norms and sizes") {
  CHECK_THROWS_AS(PureState(CVector::Ones(4)), Error);
  CHECK_THROWS_AS(PureState::normalized(CVector::Ones(3)), Error);
  CHECK_THROWS_AS(PureState::normalized(CVector::Zero(4)), Error);
  CHECK_THROWS_AS(PureState::normalized(CVector::Ones(32)), Error);
}

TEST_CASE("json round trip") {
  const PureState psi = random_pure_state(2, 5);
  const PureState back = io::read_pure(io::state_document(psi));
  CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);

  const DensityMatrix rho(oracle::random_density(4, 2, 3));
  const DensityMatrix rb = io::read_density(io::density_document(rho));
  CHECK((rb.matrix() - rho.matrix()).norm() < 1e-15);

  const DensityMatrix from_pure = io::read_density(io::state_document(psi));
  CHECK(from_pure.rank() == 1);

  nlohmann::json broken = io::state_document(psi);
  broken["n_qubits"] = 3;
  CHECK_THROWS_AS(io::read_pure(broken), Error);
  CHECK_THROWS_AS(io::read_pure(nlohmann::json::parse(R"({"kind":"pure"})")), Error);
}
