#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/syz.hpp"

using namespace syzlab;
using namespace syzlab::syz;

namespace {

Vec v1(double x) { return (Vec(1) << x).finished(); }

}  // namespace

TEST_CASE("transform: CP1 h0 section") {
  const auto tp = fixtures::cp1();
  const auto s = transform(metrics::MetricPotential(tp, {1, 0}));
  CHECK(s.section_map(v1(0))[0] == doctest::Approx(-0.5));
  CHECK(s.representative() == LatticeVec{1, 0});
  CHECK(s.picard_class() == toric::picard_reduce(tp->polytope().fan(), {1, 0}));
  const auto z = transform(metrics::MetricPotential(tp, {0, 0}));
  CHECK(z.section_map(v1(2.0)).norm() == 0.0);
}

TEST_CASE("transform is linear in the correction") {
  const auto tp = fixtures::cp2();
  const ScalarField bump = ScalarField::bump((Vec(2) << 0.2, 0.1).finished(), 1.0, 0.7);
  const auto s0 = transform(metrics::MetricPotential(tp, {1, 1, 1}));
  const auto s1 = transform(metrics::MetricPotential(tp, {1, 1, 1}, bump));
  std::mt19937_64 rng(42);
  for (int k = 0; k < 50; ++k) {
    const Vec xi = fixtures::random_point(rng, 2, 1.5);
    CHECK((s1.section_map(xi) - s0.section_map(xi) - bump.gradient(xi)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("inverse_transform: h0 round trip, zero section, quartic") {
  const auto tp = fixtures::cp1();
  const auto s = transform(metrics::MetricPotential(tp, {1, 0}));
  const auto m = inverse_transform(s);
  CHECK(m.divisor() == LatticeVec{1, 0});
  CHECK(affine_gauge_fit(m.correction(), 8.0, 33).max_deviation < 1e-6);
  CHECK(max_section_difference(transform(m).potential(), s.potential(), 8.0, 33) < 1e-12);

  const auto zero = LagrangianSection(tp, ScalarField::zero(1));
  const auto mz = inverse_transform(zero);
  CHECK(mz.divisor() == LatticeVec{0, 0});
  CHECK(affine_gauge_fit(mz.correction(), 8.0, 33).max_deviation < 1e-12);

  const auto quartic = LagrangianSection(tp, ScalarField::polynomial(1, {{0.25, {4}}}));
  try {
    inverse_transform(quartic);
    FAIL("expected NotExtendable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotExtendable);
  }
}

TEST_CASE("lift_shift: CP1 example, identity, and inverse shift") {
  const auto tp = fixtures::cp1();
  const auto s = transform(metrics::MetricPotential(tp, {1, 0}));
  const auto t = lift_shift(s, {1});
  CHECK(t.representative() == LatticeVec{2, -1});
  CHECK(t.picard_class() == s.picard_class());
  CHECK(t.section_map(v1(0.3))[0] == doctest::Approx(s.section_map(v1(0.3))[0] - 1.0));
  const auto id = lift_shift(s, {0});
  CHECK(id.representative() == s.representative());
  CHECK(max_section_difference(id.potential(), s.potential(), 5.0, 21) == 0.0);
  const auto back = lift_shift(t, {-1});
  CHECK(back.representative() == s.representative());
  CHECK(max_section_difference(back.potential(), s.potential(), 5.0, 21) < 1e-15);

  const auto cp2 = fixtures::cp2();
  const auto s2 = transform(metrics::MetricPotential(cp2, {1, 1, 1}));
  for (const LatticeVec& u : {LatticeVec{1, 0}, LatticeVec{-2, 3}}) {
    const auto shifted = lift_shift(s2, u);
    CHECK(shifted.picard_class() == s2.picard_class());
    // The inverse transform of a shifted lift lands on the shifted representative.
    CHECK(inverse_transform(shifted).divisor() == *shifted.representative());
  }
}

TEST_CASE("section over the polytope: facet boundary values") {
  const auto tp = fixtures::cp1();
  const auto s = transform(metrics::MetricPotential(tp, {1, 0}));
  kaehler::LegendrePair lp(tp);
  CHECK(std::abs(section_over_polytope(s, lp, v1(1e-4))[0] + 1.0) < 1e-3);
  CHECK(std::abs(section_over_polytope(s, lp, v1(1.0 - 1e-4))[0]) < 1e-3);
  const auto z = LagrangianSection(tp, ScalarField::zero(1));
  CHECK(section_over_polytope(z, lp, v1(0.4))[0] == 0.0);
  CHECK_THROWS_AS(section_over_polytope(s, lp, v1(0.0)), Error);
}

TEST_CASE("sections are exact: the Jacobian of y is symmetric") {
  const auto tp = fixtures::f1();
  const ScalarField bump = ScalarField::bump((Vec(2) << 0.5, -0.5).finished(), 2.0, 0.4);
  const auto s = transform(metrics::MetricPotential(tp, {1, 0, 2, -1}, bump));
  CHECK(curl_defect(s, 4.0, 17) < 1e-6);
}

TEST_CASE("round trip on every corpus metric reproduces the class and y") {
  struct Case {
    std::shared_ptr<const kaehler::ToricPotential> tp;
    LatticeVec a;
  };
  for (const auto& c : {Case{fixtures::cp1(), {1, 0}}, Case{fixtures::cp1(), {0, 1}}, Case{fixtures::cp1(), {2, 3}},
                        Case{fixtures::cp2(), {1, 1, 1}}, Case{fixtures::cp2(), {1, 0, 0}},
                        Case{fixtures::cp2(), {-1, 2, 0}}, Case{fixtures::p1xp1(), {1, 1, 0, 2}},
                        Case{fixtures::f1(), {1, 0, 2, -1}}}) {
    const metrics::MetricPotential m(c.tp, c.a);
    const auto s = transform(m);
    const auto inv = invert(s);
    CHECK(inv.inference.picard == m.picard_class());
    CHECK(inv.metric.divisor() == c.a);
    CHECK(max_section_difference(transform(inv.metric).potential(), s.potential(), 8.0, 17) < 1e-8);
  }
}

TEST_CASE("affine gauge fit removes affine parts exactly") {
  const ScalarField f = ScalarField::affine((Vec(2) << 2.0, -1.0).finished(), 3.0) +
                        ScalarField::bump((Vec(2) << 0.0, 0.0).finished(), 1.0, 1e-3);
  const auto fit = affine_gauge_fit(f, 4.0, 17);
  CHECK(fit.linear[0] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(fit.max_deviation < 1.1e-3);
  CHECK(affine_gauge_fit(ScalarField::affine((Vec(2) << 2.0, -1.0).finished(), 3.0), 4.0, 9).max_deviation < 1e-12);
}

TEST_CASE("section CSV export has headers and interior rows only") {
  const auto tp = fixtures::cp2();
  const auto s = transform(metrics::MetricPotential(tp, {1, 1, 1}));
  std::ostringstream xi_csv, x_csv;
  SectionGrid grid;
  grid.xi_per_axis = 5;
  grid.x_per_axis = 11;
  write_section_csv(s, grid, xi_csv, x_csv);
  std::istringstream a(xi_csv.str()), b(x_csv.str());
  std::string line;
  std::getline(a, line);
  CHECK(line == "xi1,xi2,y1,y2");
  int rows = 0;
  while (std::getline(a, line)) ++rows;
  CHECK(rows == 25);
  std::getline(b, line);
  CHECK(line == "x1,x2,y1,y2");
  rows = 0;
  while (std::getline(b, line)) ++rows;
  CHECK(rows == 36);  // grid points with x, y >= 0.1 and x + y <= 0.9, plus margin
}
