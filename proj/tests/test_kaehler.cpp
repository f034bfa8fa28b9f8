#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/kaehler.hpp"

using namespace syzlab;
using namespace syzlab::kaehler;

namespace {

Vec v1(double x) { return (Vec(1) << x).finished(); }
Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

}  // namespace

TEST_CASE("phi on CP1 matches the closed form") {
  const auto tp = fixtures::cp1();
  CHECK(tp->value(v1(0)) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(tp->gradient(v1(0))[0] == doctest::Approx(0.5));
  CHECK(tp->hessian(v1(0))(0, 0) == doctest::Approx(0.5));
  for (double x : {-7.0, -1.2, 0.4, 3.3}) {
    const double e = std::exp(2 * x);
    CHECK(tp->value(v1(x)) == doctest::Approx(0.5 * std::log1p(e)).epsilon(1e-14));
    CHECK(tp->gradient(v1(x))[0] == doctest::Approx(e / (1 + e)).epsilon(1e-14));
    CHECK(tp->hessian(v1(x))(0, 0) == doctest::Approx(2 * e / ((1 + e) * (1 + e))).epsilon(1e-13));
  }
}

TEST_CASE("moment map examples") {
  const auto cp1 = fixtures::cp1();
  CHECK(cp1->moment_map(v1(0))[0] == doctest::Approx(0.5));
  CHECK(cp1->moment_map(v1(-10))[0] < 1e-8);
  CHECK(cp1->moment_map(v1(-10))[0] > 0.0);
  const auto cp2 = fixtures::cp2();
  const Vec mu = cp2->moment_map(v2(0, 0));
  CHECK(mu[0] == doctest::Approx(1.0 / 3));
  CHECK(mu[1] == doctest::Approx(1.0 / 3));
}

TEST_CASE("phi derivatives agree with finite differences; Hessian is SPD; mu stays inside") {
  std::mt19937_64 rng(42);
  for (const auto& tp : {fixtures::cp1(), fixtures::cp2(), fixtures::p1xp1(), fixtures::f1()}) {
    const int n = tp->dim();
    const double h = 1e-4;
    for (int k = 0; k < 100; ++k) {
      const Vec xi = fixtures::random_point(rng, n, 3.0);
      const Vec g = tp->gradient(xi);
      const Mat H = tp->hessian(xi);
      for (int j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = h;
        CHECK(std::abs((tp->value(xi + e) - tp->value(xi - e)) / (2 * h) - g[j]) < 1e-5);
        const Vec dg = (tp->gradient(xi + e) - tp->gradient(xi - e)) / (2 * h);
        CHECK((dg - H.col(j)).cwiseAbs().maxCoeff() < 1e-5);
      }
    }
    for (int k = 0; k < 100; ++k) {
      const Vec xi = fixtures::random_point(rng, n, 10.0);
      Eigen::SelfAdjointEigenSolver<Mat> es(tp->hessian(xi));
      CHECK(es.eigenvalues().minCoeff() > 0.0);
      CHECK(tp->polytope().min_facet_value(tp->moment_map(xi)) > 0.0);
    }
  }
}

TEST_CASE("weights: explicit, from map, and invalid") {
  const auto poly = fixtures::polytope(fixtures::cp1_fan(), {0, 1});
  const auto tp = ToricPotential::make(poly, weights_from_map(*poly, {{{1}, 3.0}}));
  // phi = 1/2 log(1 + 3 e^{2 xi}); mu(0) = 3/4
  CHECK(tp->moment_map(v1(0))[0] == doctest::Approx(0.75));
  CHECK_THROWS_AS(ToricPotential::make(poly, std::vector<double>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(ToricPotential::make(poly, std::vector<double>{1.0, -1.0}), Error);
  CHECK_THROWS_AS(weights_from_map(*poly, {{{5}, 1.0}}), Error);
  // A zero weight at a non-vertex point is allowed.
  const auto big = fixtures::polytope(fixtures::cp1_fan(), {0, 2});
  const auto tp2 = ToricPotential::make(big, std::vector<double>{1.0, 0.0, 1.0});
  CHECK(tp2->moment_map(v1(0))[0] == doctest::Approx(1.0));
}

TEST_CASE("Legendre inverse: CP1 closed form and examples") {
  LegendrePair lp(fixtures::cp1());
  CHECK(std::abs(lp.inverse(v1(0.5))[0]) < 1e-12);
  CHECK(lp.inverse(lp.forward(v1(1.3)))[0] == doctest::Approx(1.3).epsilon(1e-10));
  for (double x : {1e-5, 0.01, 0.3, 0.77, 0.99999}) {
    // Psi(x) = 1/2 log(x / (1 - x))
    CHECK(std::abs(lp.inverse(v1(x))[0] - 0.5 * std::log(x / (1 - x))) < 1e-10);
  }
  try {
    lp.inverse(v1(0.0));
    FAIL("expected BoundaryPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryPoint);
  }
  CHECK_THROWS_AS(lp.inverse(v1(1.5)), Error);
}

TEST_CASE("Legendre round trips on sampled grids") {
  std::mt19937_64 rng(42);
  for (const auto& tp : {fixtures::cp1(), fixtures::cp2(), fixtures::p1xp1(), fixtures::f1()}) {
    LegendrePair lp(tp);
    for (int k = 0; k < 200; ++k) {
      const Vec xi = fixtures::random_point(rng, tp->dim(), 5.0);
      const Vec x = lp.forward(xi);
      if (tp->polytope().min_facet_value(x) < lp.options().margin) {
        CHECK_THROWS_AS(lp.inverse(x), Error);
        continue;
      }
      CHECK((lp.inverse(x) - xi).cwiseAbs().maxCoeff() < 1e-8);
    }
    for (int k = 0; k < 200; ++k) {
      const Vec xi = fixtures::random_point(rng, tp->dim(), 4.0);
      const Vec x = lp.forward(xi);
      if (tp->polytope().min_facet_value(x) < lp.options().margin) continue;
      CHECK((lp.forward(lp.inverse(x)) - x).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("psi Hessian inverts the phi Hessian") {
  LegendrePair lp1(fixtures::cp1());
  CHECK(lp1.psi_hessian(v1(0.5))(0, 0) == doctest::Approx(2.0));
  // psi = x log x + (1 - x) log(1 - x) up to a factor 1/2: psi'' = 1 / (2 x (1 - x))
  CHECK(lp1.psi_hessian(v1(0.2))(0, 0) == doctest::Approx(1.0 / (2 * 0.2 * 0.8)).epsilon(1e-9));
  const auto cp2 = fixtures::cp2();
  LegendrePair lp2(cp2);
  const Vec x = v2(1.0 / 3, 1.0 / 3);
  // At xi = 0 the Hessian is 2 Cov of {(0,0),(1,0),(0,1)} with equal weights.
  Mat H(2, 2);
  H << 4.0 / 9, -2.0 / 9, -2.0 / 9, 4.0 / 9;
  CHECK((lp2.psi_hessian(x) - H.inverse()).cwiseAbs().maxCoeff() < 1e-9);
  std::mt19937_64 rng(42);
  for (int k = 0; k < 50; ++k) {
    const Vec xi = fixtures::random_point(rng, 2, 3.0);
    const Vec y = lp2.forward(xi);
    CHECK((lp2.psi_hessian(y) * cp2->hessian(xi) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  }
}
