#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <vector>

#include "entwit/nnls.hpp"
#include "entwit/optimize.hpp"
#include "entwit/qstate.hpp"

using namespace entwit;
using Eigen::VectorXd;

TEST_CASE("minimize a convex quadratic with and without gradients") {
  const VectorXd c = (VectorXd(3) << 1.0, -2.0, 0.5).finished();
  auto f = [&](const VectorXd &x) { return (x - c).squaredNorm() + 3.0; };
  auto g = [&](const VectorXd &x) { VectorXd r = 2.0 * (x - c); return r; };
  const auto fd = optimize::minimize(f, VectorXd::Zero(3), {});
  CHECK((fd.x - c).norm() < 1e-5);
  CHECK(std::abs(fd.value - 3.0) < 1e-9);
  const auto exact = optimize::minimize(f, VectorXd::Zero(3), {}, g);
  CHECK((exact.x - c).norm() < 1e-6);
}

TEST_CASE("minimize Rosenbrock") {
  auto f = [](const VectorXd &x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  optimize::DescentOptions o;
  o.max_iterations = 20000;
  o.rel_tolerance = 1e-16;
  const auto r = optimize::minimize(f, (VectorXd(2) << -1.2, 1.0).finished(), o);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-3);
  CHECK(std::abs(r.x[1] - 1.0) < 2e-3);
}

TEST_CASE("descent is monotone on a kinked objective") {
  auto f = [](const VectorXd &x) { return std::abs(x[0] - 0.3) + std::abs(x[1] + 0.2); };
  const VectorXd x0 = (VectorXd(2) << 2.0, 2.0).finished();
  const auto r = optimize::minimize(f, x0, {});
  CHECK(r.value <= f(x0));
  CHECK(r.value < 1e-3);
}

TEST_CASE("projection keeps iterates on the sphere") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
  h.diagonal() << 1.0, 4.0, 2.0, 3.0;
  auto f = [&](const VectorXd &x) { return x.dot(h * x); };
  auto proj = [](VectorXd &x) { x.normalize(); };
  const auto r = optimize::maximize(f, VectorXd::Ones(4).normalized(), {}, {}, proj);
  CHECK(std::abs(r.x.norm() - 1.0) < 1e-12);
  CHECK(std::abs(r.value - 4.0) < 1e-8);
}

TEST_CASE("fd gradient") {
  auto f = [](const VectorXd &x) { return std::sin(x[0]) * std::exp(x[1]); };
  const VectorXd x = (VectorXd(2) << 0.4, -0.3).finished();
  const VectorXd g = optimize::fd_gradient(f, x, 1e-6);
  CHECK(std::abs(g[0] - std::cos(0.4) * std::exp(-0.3)) < 1e-9);
  CHECK(std::abs(g[1] - std::sin(0.4) * std::exp(-0.3)) < 1e-9);
}

TEST_CASE("golden section") {
  const auto r = optimize::golden_section_maximize(
      [](double x) { return -(x - 0.7) * (x - 0.7); }, 0.0, 2.0, 1e-10);
  CHECK(std::abs(r.x - 0.7) < 1e-8);
  const auto s = optimize::golden_section_maximize([](double x) { return std::sin(x); }, 0.0,
                                                   std::numbers::pi, 1e-10);
  CHECK(std::abs(s.x - std::numbers::pi / 2) < 1e-7);
  CHECK(std::abs(s.value - 1.0) < 1e-12);
  // monotone functions end at the boundary
  const auto m = optimize::golden_section_maximize([](double x) { return x; }, 0.0, 1.0, 1e-10);
  CHECK(m.x > 1.0 - 1e-8);
}

TEST_CASE("parallel_for visits every index once") {
  for (unsigned threads : {1u, 2u, 4u}) {
    optimize::set_thread_count(threads);
    CHECK(optimize::thread_count() == threads);
    std::vector<int> hits(1000, 0);
    std::atomic<int> total{0};
    optimize::parallel_for(hits.size(), [&](std::size_t i) {
      hits[i] += 1;
      total += 1;
    });
    CHECK(total == 1000);
    for (int h : hits) {
      REQUIRE(h == 1);
    }
  }
  optimize::set_thread_count(0);
  CHECK(optimize::thread_count() >= 1);
  optimize::parallel_for(0, [](std::size_t) { FAIL("no calls expected"); });
}

TEST_CASE("nnls") {
  // exact nonnegative solution
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  const VectorXd b = a * (VectorXd(2) << 0.3, 0.7).finished();
  const auto r = nnls(a, b);
  CHECK(std::abs(r.x[0] - 0.3) < 1e-12);
  CHECK(std::abs(r.x[1] - 0.7) < 1e-12);
  CHECK(r.residual < 1e-12);

  // unconstrained optimum is negative in one coordinate
  Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  const auto c = nnls(i2, (VectorXd(2) << 1.0, -2.0).finished());
  CHECK(std::abs(c.x[0] - 1.0) < 1e-14);
  CHECK(c.x[1] == 0.0);
  CHECK(std::abs(c.residual - 2.0) < 1e-14);

  // KKT conditions on random problems
  auto rng = make_rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd m(12, 7);
    VectorXd y(12);
    for (int i = 0; i < 12; ++i) {
      y[i] = normal(rng);
      for (int j = 0; j < 7; ++j) {
        m(i, j) = normal(rng);
      }
    }
    const auto s = nnls(m, y);
    const VectorXd w = m.transpose() * (y - m * s.x);
    for (int j = 0; j < 7; ++j) {
      REQUIRE(s.x[j] >= 0.0);
      REQUIRE(w[j] <= 1e-9);
      if (s.x[j] > 0.0) {
        REQUIRE(std::abs(w[j]) < 1e-9);
      }
    }
    CHECK(std::abs(s.residual - (m * s.x - y).norm()) < 1e-12);
  }
}

TEST_CASE("hermitian coordinates are an isometry") {
  auto rng = make_rng(8);
  for (int t = 0; t < 20; ++t) {
    CMatrix a(4, 4);
    for (int i = 0; i < 4; ++i) {
      a.col(i) = random_gaussian_vector(4, rng);
    }
    const CMatrix h = a + a.adjoint();
    const VectorXd v = hermitian_coordinates(h);
    CHECK(v.size() == 16);
    CHECK(std::abs(v.norm() - h.norm()) < 1e-12);
  }
}
