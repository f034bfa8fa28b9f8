#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fixtures.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/toric.hpp"

using namespace syzlab;
using namespace syzlab::toric;

namespace {

// Brute-force oracle: scan a box and keep points satisfying every facet inequality.
std::vector<LatticeVec> scan_points(const Fan& fan, const LatticeVec& offsets, int reach) {
  std::vector<LatticeVec> out;
  if (fan.dim == 1) {
    for (int a = -reach; a <= reach; ++a) {
      bool in = true;
      for (std::size_t i = 0; i < fan.generators.size(); ++i) in = in && a * fan.generators[i][0] + offsets[i] >= 0;
      if (in) out.push_back({a});
    }
    return out;
  }
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b) {
      bool in = true;
      for (std::size_t i = 0; i < fan.generators.size(); ++i)
        in = in && a * fan.generators[i][0] + b * fan.generators[i][1] + offsets[i] >= 0;
      if (in) out.push_back({a, b});
    }
  return out;
}

// Shoelace area of a convex polygon given by vertices in angular order.
double shoelace(std::vector<LatticeVec> v) {
  double cx = 0, cy = 0;
  for (auto& p : v) cx += p[0], cy += p[1];
  cx /= v.size();
  cy /= v.size();
  std::sort(v.begin(), v.end(), [&](const LatticeVec& p, const LatticeVec& q) {
    return std::atan2(p[1] - cy, p[0] - cx) < std::atan2(q[1] - cy, q[0] - cx);
  });
  double area = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    area += static_cast<double>(p[0] * q[1] - p[1] * q[0]);
  }
  return std::abs(area) / 2;
}

// Brute-force oracle for a - b in iota(M): search u in a small box.
bool brute_equal(const Fan& fan, const LatticeVec& a, const LatticeVec& b) {
  const int R = 6;
  std::vector<LatticeVec> candidates;
  if (fan.dim == 1)
    for (int x = -R; x <= R; ++x) candidates.push_back({x});
  else
    for (int x = -R; x <= R; ++x)
      for (int y = -R; y <= R; ++y) candidates.push_back({x, y});
  for (const auto& u : candidates) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size(); ++i) ok = ok && a[i] - b[i] == pairing(u, fan.generators[i]);
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_fan: standard fans are smooth and complete") {
  for (const auto& fan : {fixtures::cp1_fan(), fixtures::cp2_fan(), fixtures::p1xp1_fan(), fixtures::f1_fan()}) {
    const auto r = validate_fan(fan);
    CHECK(r.all_primitive());
    CHECK(r.all_smooth());
    CHECK(r.complete);
    CHECK(r.exact_completeness);
    CHECK(r.ok());
  }
}

TEST_CASE("validate_fan: a single quadrant is incomplete") {
  const Fan fan{2, {{1, 0}, {0, 1}}, {{0, 1}}};
  const auto r = validate_fan(fan);
  CHECK(r.all_smooth());
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.ok());
}

TEST_CASE("validate_fan: non-primitive and non-smooth generators are flagged") {
  const Fan doubled{1, {{2}, {-1}}, {{0}, {1}}};
  CHECK_FALSE(validate_fan(doubled).all_primitive());
  // Weighted projective plane P(1,1,2): cone {v2, v3} has determinant 2.
  const Fan singular{2, {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {2, 0}}};
  const auto r = validate_fan(singular);
  CHECK_FALSE(r.all_smooth());
  CHECK(r.complete);
}

TEST_CASE("validate_fan: structural errors throw") {
  CHECK_THROWS_AS(validate_fan(Fan{2, {{1, 0}, {0, 1}}, {{0, 5}}}), Error);
  CHECK_THROWS_AS(validate_fan(Fan{1, {{1}, {1}}, {{0}, {1}}}), Error);
  try {
    validate_fan(Fan{1, {{1}, {1}}, {{0}, {1}}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedFan);
  }
}

TEST_CASE("validate_fan: sampled completeness in three dimensions") {
  const Fan cp3{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}, {{0, 1, 2}, {1, 2, 3}, {2, 3, 0}, {3, 0, 1}}};
  const auto r = validate_fan(cp3);
  CHECK(r.ok());
  CHECK_FALSE(r.exact_completeness);
  const Fan octant{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2}}};
  CHECK_FALSE(validate_fan(octant).complete);
}

TEST_CASE("polytope: CP1 interval and CP2 simplex") {
  const auto p1 = Polytope::build(fixtures::cp1_fan(), {0, 1});
  CHECK(p1.volume() == doctest::Approx(1.0));
  CHECK(p1.vertices() == std::vector<LatticeVec>{{0}, {1}});
  const auto p2 = Polytope::build(fixtures::cp2_fan(), {0, 0, 1});
  CHECK(p2.volume() == doctest::Approx(0.5));
  CHECK(p2.vertices() == std::vector<LatticeVec>{{0, 0}, {1, 0}, {0, 1}});
  CHECK(p2.num_facets() == 3);
}

TEST_CASE("polytope: degenerate offsets are not ample") {
  try {
    Polytope::build(fixtures::cp1_fan(), {0, 0});
    FAIL("expected NotAmple");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAmple);
  }
  // P1 x P1 with a collapsed side.
  CHECK_THROWS_AS(Polytope::build(fixtures::p1xp1_fan(), {0, 0, 1, 0}), Error);
}

TEST_CASE("polytope: volumes match the shoelace oracle") {
  struct Case {
    Fan fan;
    LatticeVec offsets;
  };
  for (const auto& c : {Case{fixtures::cp2_fan(), {0, 0, 1}}, Case{fixtures::cp2_fan(), {0, 0, 3}},
                        Case{fixtures::p1xp1_fan(), {0, 0, 2, 1}}, Case{fixtures::f1_fan(), {0, 0, 1, 2}},
                        Case{fixtures::f1_fan(), {1, 0, 2, 1}}}) {
    const auto p = Polytope::build(c.fan, c.offsets);
    CHECK(p.volume() == doctest::Approx(shoelace(p.vertices())).epsilon(1e-12));
    CHECK(p.vertices().size() == c.fan.max_cones.size());
  }
}

TEST_CASE("polytope: facet lattice volumes are integral for CP1, CP2 and F1") {
  const auto p1 = Polytope::build(fixtures::cp1_fan(), {0, 1});
  CHECK(p1.facet_lattice_volumes() == std::vector<double>{1.0, 1.0});
  const auto p2 = Polytope::build(fixtures::cp2_fan(), {0, 0, 1});
  for (double v : p2.facet_lattice_volumes()) CHECK(v == doctest::Approx(1.0));
  // The hypotenuse has Euclidean length sqrt 2 and normal length sqrt 2.
  CHECK(p2.facet_euclidean_volumes()[2] == doctest::Approx(std::sqrt(2.0)));
  const auto f1 = Polytope::build(fixtures::f1_fan(), {0, 0, 1, 2});
  // Trapezoid (0,0),(1,0),(3,2),(0,2): edges of lattice length 2, 1, 2, 3.
  const std::vector<double> expected{2.0, 1.0, 2.0, 3.0};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const double v = f1.facet_lattice_volumes()[k];
    CHECK(v == doctest::Approx(expected[k]));
    CHECK(std::abs(v - std::round(v)) < 1e-12);
  }
}

TEST_CASE("lattice_points: match the brute-force scan") {
  CHECK(Polytope::build(fixtures::cp1_fan(), {0, 1}).lattice_points() == std::vector<LatticeVec>{{0}, {1}});
  CHECK(Polytope::build(fixtures::cp2_fan(), {0, 0, 1}).lattice_points() ==
        std::vector<LatticeVec>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(Polytope::build(fixtures::cp2_fan(), {0, 0, 2}).lattice_points().size() == 6);
  struct Case {
    Fan fan;
    LatticeVec offsets;
  };
  for (const auto& c : {Case{fixtures::cp2_fan(), {1, 2, 3}}, Case{fixtures::p1xp1_fan(), {1, 0, 2, 3}},
                        Case{fixtures::f1_fan(), {0, 0, 1, 2}}, Case{fixtures::f1_fan(), {2, 1, 3, 2}},
                        Case{fixtures::cp1_fan(), {-2, 5}}}) {
    CHECK(Polytope::build(c.fan, c.offsets).lattice_points() == scan_points(c.fan, c.offsets, 12));
  }
}

TEST_CASE("lattice_points: invariant under a unimodular change of basis") {
  // g = [[1, 1], [0, 1]] acts on N; M transforms by the inverse transpose.
  const Fan fan = fixtures::f1_fan();
  Fan moved = fan;
  for (auto& v : moved.generators) v = {v[0] + v[1], v[1]};
  const auto a = Polytope::build(fan, {0, 0, 1, 2}).lattice_points();
  const auto b = Polytope::build(moved, {0, 0, 1, 2}).lattice_points();
  std::vector<LatticeVec> mapped;
  for (const auto& u : a) mapped.push_back({u[0], u[1] - u[0]});  // u -> g^{-T} u
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == b);
}

TEST_CASE("iota: direct pairings") {
  CHECK(iota(fixtures::cp1_fan(), {1}) == LatticeVec{1, -1});
  CHECK(iota(fixtures::cp2_fan(), {1, 0}) == LatticeVec{1, 0, -1});
  CHECK(iota(fixtures::p1xp1_fan(), {0, 0}) == LatticeVec{0, 0, 0, 0});
}

TEST_CASE("picard: equality and canonical forms") {
  const Fan cp1 = fixtures::cp1_fan();
  CHECK(picard_equal(cp1, {1, 0}, {0, 1}));
  CHECK(picard_equal(cp1, {3, -2}, {3, -2}));
  CHECK_FALSE(picard_equal(cp1, {1, 0}, {2, 0}));
  const Fan cp2 = fixtures::cp2_fan();
  for (const auto& u : std::vector<LatticeVec>{{1, 0}, {0, 1}, {-3, 2}, {5, 7}}) {
    const auto c = picard_reduce(cp2, iota(cp2, u));
    CHECK(c.canonical == LatticeVec{0, 0, 0});
  }
  const auto c = picard_reduce(cp2, {1, 1, 1});
  CHECK(c.canonical == LatticeVec{0, 0, 3});
  CHECK(picard_reduce(cp2, c.canonical) == c);
}

TEST_CASE("picard: agrees with the brute-force search on random pairs") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> d(-3, 3);
  for (const auto& fan : {fixtures::cp1_fan(), fixtures::cp2_fan(), fixtures::p1xp1_fan(), fixtures::f1_fan()}) {
    for (int trial = 0; trial < 40; ++trial) {
      LatticeVec a(fan.generators.size()), b(fan.generators.size());
      for (auto& x : a) x = d(rng);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = trial % 2 ? d(rng) : a[i];
      if (trial % 4 == 0) {
        LatticeVec u(static_cast<std::size_t>(fan.dim));
        for (auto& x : u) x = d(rng);
        const auto s = iota(fan, u);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += s[i];
      }
      CHECK(picard_equal(fan, a, b) == brute_equal(fan, a, b));
    }
  }
}

TEST_CASE("solve_on_cone recovers u") {
  const Fan f1 = fixtures::f1_fan();
  for (int c = 0; c < f1.num_cones(); ++c) {
    const LatticeVec u{3, -2};
    LatticeVec values;
    for (int i : f1.max_cones[c]) values.push_back(pairing(u, f1.generators[i]));
    CHECK(solve_on_cone(f1, c, values) == u);
  }
}

TEST_CASE("superpotential: direct evaluations") {
  using C = std::complex<double>;
  const Fan cp1 = fixtures::cp1_fan();
  const std::vector<C> one{C(1.0, 0.0)};
  const std::vector<C> i{C(0.0, 1.0)};
  CHECK(std::abs(superpotential(cp1, {0, 0}, one) - C(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(superpotential(cp1, {0, 0}, i)) < 1e-15);
  const auto p2 = Polytope::build(fixtures::cp2_fan(), {0, 0, 1});
  const std::vector<C> ones{C(1.0, 0.0), C(1.0, 0.0)};
  CHECK(std::abs(superpotential(p2, ones) - C(2.0 + std::exp(-1.0), 0.0)) < 1e-15);
  const std::vector<C> zero{C(0.0, 0.0), C(1.0, 0.0)};
  try {
    superpotential(p2, zero);
    FAIL("expected ZeroCoordinate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroCoordinate);
  }
}

TEST_CASE("int_determinant is exact") {
  CHECK(int_determinant({{1, 0}, {0, 1}}) == 1);
  CHECK(int_determinant({{0, 1}, {-1, -1}}) == 1);
  CHECK(int_determinant({{2, 3, 1}, {4, 1, 5}, {7, 2, 2}}) == 2 * (2 - 10) - 3 * (8 - 35) + 1 * (8 - 7));
  CHECK(int_determinant({{1, 2}, {2, 4}}) == 0);
}
