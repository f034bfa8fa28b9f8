#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "syzlab/metrics.hpp"

using namespace syzlab;
using namespace syzlab::metrics;

namespace {

Vec v1(double x) { return (Vec(1) << x).finished(); }

}  // namespace

TEST_CASE("Guillemin potential on CP1 with a = (1, 0)") {
  const auto tp = fixtures::cp1();
  const LatticeVec a{1, 0};
  CHECK(guillemin_eval(*tp, a, v1(0)) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(guillemin_grad(*tp, a, v1(0))[0] == doctest::Approx(-0.5));
  CHECK(guillemin_hess(*tp, a, v1(0))(0, 0) == doctest::Approx(0.5));
  for (double x : {-6.0, -0.7, 1.1, 5.0}) {
    // g = 1/2 log(1 + e^{-2 xi}), g' = -1 / (1 + e^{2 xi})
    const double e = std::exp(2 * x);
    CHECK(guillemin_eval(*tp, a, v1(x)) == doctest::Approx(0.5 * std::log1p(1 / e)).epsilon(1e-13));
    CHECK(guillemin_grad(*tp, a, v1(x))[0] == doctest::Approx(-1 / (1 + e)).epsilon(1e-13));
    CHECK(guillemin_hess(*tp, a, v1(x))(0, 0) == doctest::Approx(2 * e / ((1 + e) * (1 + e))).epsilon(1e-12));
  }
}

TEST_CASE("a = 0 gives the zero potential") {
  const auto tp = fixtures::cp2();
  const LatticeVec a{0, 0, 0};
  const Vec xi = (Vec(2) << 0.3, -1.2).finished();
  CHECK(guillemin_eval(*tp, a, xi) == 0.0);
  CHECK(guillemin_grad(*tp, a, xi).norm() == 0.0);
  CHECK(guillemin_hess(*tp, a, xi).norm() == 0.0);
}

TEST_CASE("Guillemin derivatives agree with finite differences") {
  std::mt19937_64 rng(42);
  struct Case {
    std::shared_ptr<const kaehler::ToricPotential> tp;
    LatticeVec a;
  };
  for (const auto& c : {Case{fixtures::cp1(), {2, 3}}, Case{fixtures::cp2(), {1, 1, 1}},
                        Case{fixtures::cp2(), {-1, 2, 0}}, Case{fixtures::f1(), {1, 0, 2, -1}}}) {
    const int n = c.tp->dim();
    const double h = 1e-4;
    for (int k = 0; k < 100; ++k) {
      const Vec xi = fixtures::random_point(rng, n, 8.0);
      const Vec g = guillemin_grad(*c.tp, c.a, xi);
      const Mat H = guillemin_hess(*c.tp, c.a, xi);
      for (int j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = h;
        const double dv = (guillemin_eval(*c.tp, c.a, xi + e) - guillemin_eval(*c.tp, c.a, xi - e)) / (2 * h);
        CHECK(std::abs(dv - g[j]) < 1e-5);
        const Vec dg = (guillemin_grad(*c.tp, c.a, xi + e) - guillemin_grad(*c.tp, c.a, xi - e)) / (2 * h);
        CHECK((dg - H.col(j)).cwiseAbs().maxCoeff() < 1e-5);
      }
    }
  }
}

TEST_CASE("Guillemin potential equals -1/2 sum a_i log l_i(mu)") {
  std::mt19937_64 rng(42);
  struct Case {
    std::shared_ptr<const kaehler::ToricPotential> tp;
    LatticeVec a;
  };
  for (const auto& c : {Case{fixtures::cp1(), {1, 0}}, Case{fixtures::cp2(), {1, 1, 1}},
                        Case{fixtures::p1xp1(), {1, 2, 0, -1}}, Case{fixtures::f1(), {1, 0, 2, -1}}}) {
    for (int k = 0; k < 100; ++k) {
      const Vec xi = fixtures::random_point(rng, c.tp->dim(), 4.0);
      CHECK(std::abs(guillemin_eval(*c.tp, c.a, xi) - guillemin_via_moment_map(*c.tp, c.a, xi)) < 1e-10);
    }
  }
}

TEST_CASE("curvature matrix examples") {
  const auto tp = fixtures::cp1();
  MetricPotential m(tp, {1, 0});
  CHECK(curvature_matrix(m, v1(0))(0, 0) == doctest::Approx(0.5));
  MetricPotential zero(tp, {0, 0});
  CHECK(curvature_matrix(zero, v1(0.4)).norm() == 0.0);
  MetricPotential phi_metric(tp, {0, 0}, tp->field());
  CHECK(curvature_matrix(phi_metric, v1(0.4))(0, 0) == doctest::Approx(tp->hessian(v1(0.4))(0, 0)));
}

TEST_CASE("Hermitian-Einstein residual examples") {
  const auto cp1 = fixtures::cp1();
  CHECK(he_residual(MetricPotential(cp1, {1, 0}), 0.0, v1(0)) == doctest::Approx(1.0));
  CHECK(he_residual(MetricPotential(cp1, {0, 0}), 0.0, v1(0.3)) == 0.0);
  std::mt19937_64 rng(42);
  for (const auto& tp : {fixtures::cp2(), fixtures::f1()}) {
    const int n = tp->dim();
    const int d = tp->polytope().num_facets();
    const double lambda = 2.5;
    // g_h = (lambda / n) phi, encoded as a correction over a = 0.
    MetricPotential m(tp, LatticeVec(static_cast<std::size_t>(d), 0), (lambda / n) * tp->field());
    double worst = 0;
    for (int k = 0; k < 200; ++k)
      worst = std::max(worst, std::abs(he_residual(m, lambda, fixtures::random_point(rng, n, 6.0))));
    CHECK(worst < 1e-8);
    MetricPotential c3(tp, LatticeVec(static_cast<std::size_t>(d), 0), 3.0 * tp->field());
    CHECK(he_residual(c3, 1.0, fixtures::random_point(rng, n, 2.0)) == doctest::Approx(3.0 * n - 1.0));
  }
}

TEST_CASE("metric potential carries the Picard class of its divisor") {
  const auto cp1 = fixtures::cp1();
  CHECK(MetricPotential(cp1, {1, 0}).picard_class() == MetricPotential(cp1, {0, 1}).picard_class());
  CHECK_FALSE(MetricPotential(cp1, {1, 0}).picard_class() == MetricPotential(cp1, {2, 0}).picard_class());
}
