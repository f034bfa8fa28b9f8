#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/field.hpp"
#include "syzlab/spline.hpp"
#include "syzlab/syz.hpp"

using namespace syzlab;

namespace {

// Central differences of value for the gradient and of gradient for the Hessian.
void check_consistency(const ScalarField& f, const Vec& xi, double h, double tol) {
  const Jet j = f.jet(xi, 2);
  for (int k = 0; k < f.dim(); ++k) {
    Vec e = Vec::Zero(f.dim());
    e[k] = h;
    const double dv = (f.value(xi + e) - f.value(xi - e)) / (2 * h);
    CHECK(std::abs(dv - j.grad[k]) <= tol * (1 + std::abs(dv)));
    const Vec dg = (f.gradient(xi + e) - f.gradient(xi - e)) / (2 * h);
    for (int r = 0; r < f.dim(); ++r) CHECK(std::abs(dg[r] - j.hess(r, k)) <= tol * (1 + std::abs(dg[r])));
  }
  CHECK((j.hess - j.hess.transpose()).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

std::vector<double> sample(int dim, double T, int N, const std::function<double(const Vec&)>& f) {
  std::vector<double> out;
  for (const auto& xi : syz::box_grid(dim, T, N)) out.push_back(f(xi));
  return out;
}

}  // namespace

TEST_CASE("spline reproduces cubic polynomials exactly") {
  auto cubic1 = [](const Vec& x) { return 0.3 * x[0] * x[0] * x[0] - x[0] * x[0] + 2 * x[0] - 1; };
  TensorSpline s1(1, 2.0, 17, sample(1, 2.0, 17, cubic1));
  ScalarField f1 = ScalarField::grid(s1);
  for (double x : {-2.0, -1.37, 0.0, 0.51, 1.999, 2.0}) {
    Vec xi(1);
    xi[0] = x;
    const Jet j = f1.jet(xi);
    CHECK(j.value == doctest::Approx(cubic1(xi)).epsilon(1e-12));
    CHECK(j.grad[0] == doctest::Approx(0.9 * x * x - 2 * x + 2).epsilon(1e-11));
    CHECK(j.hess(0, 0) == doctest::Approx(1.8 * x - 2).epsilon(1e-10));
  }
  // The counterexample potential xi_1 xi_2^2 is a bicubic polynomial.
  auto mixed = [](const Vec& x) { return x[0] * x[1] * x[1]; };
  ScalarField f2 = ScalarField::grid(TensorSpline(2, 8.0, 33, sample(2, 8.0, 33, mixed)));
  std::mt19937_64 rng(42);
  for (int k = 0; k < 50; ++k) {
    const Vec xi = fixtures::random_point(rng, 2, 8.0);
    const Jet j = f2.jet(xi);
    CHECK(j.value == doctest::Approx(mixed(xi)).epsilon(1e-10));
    CHECK(j.grad[0] == doctest::Approx(xi[1] * xi[1]).epsilon(1e-10));
    CHECK(j.grad[1] == doctest::Approx(2 * xi[0] * xi[1]).epsilon(1e-10));
    CHECK(j.hess(0, 1) == doctest::Approx(2 * xi[1]).epsilon(1e-9));
    CHECK(j.hess(1, 1) == doctest::Approx(2 * xi[0]).epsilon(1e-9));
  }
}

TEST_CASE("spline interpolation error is second order in the Hessian") {
  auto f = [](const Vec& x) { return std::sin(x[0]) * std::cos(0.5 * x[1]); };
  auto fxx = [](const Vec& x) { return -std::sin(x[0]) * std::cos(0.5 * x[1]); };
  double errs[2];
  int idx = 0;
  for (int N : {33, 65}) {
    ScalarField s = ScalarField::grid(TensorSpline(2, 3.0, N, sample(2, 3.0, N, f)));
    double worst = 0;
    for (const auto& xi : syz::box_grid(2, 2.0, 21)) worst = std::max(worst, std::abs(s.hessian(xi)(0, 0) - fxx(xi)));
    errs[idx++] = worst;
  }
  CHECK(errs[1] < errs[0] / 3.0);
}

TEST_CASE("grid queries outside the box throw") {
  ScalarField f = ScalarField::grid(TensorSpline(1, 1.0, 9, std::vector<double>(9, 1.0)));
  Vec xi(1);
  xi[0] = 1.0 + 1e-9;
  try {
    f.value(xi);
    FAIL("expected OutsideGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutsideGrid);
  }
  CHECK(f.grid_box().value() == 1.0);
  CHECK(f.has_grid());
  CHECK_FALSE(ScalarField::zero(1).has_grid());
}

TEST_CASE("zero end slopes clamp the normal derivative") {
  auto f = [](const Vec& x) { return std::exp(x[0]); };
  ScalarField s = ScalarField::grid(TensorSpline(1, 1.0, 21, sample(1, 1.0, 21, f), TensorSpline::EndSlope::Zero));
  Vec xi(1);
  xi[0] = 1.0;
  CHECK(std::abs(s.gradient(xi)[0]) < 1e-12);
  xi[0] = -1.0;
  CHECK(std::abs(s.gradient(xi)[0]) < 1e-12);
}

TEST_CASE("analytic forms are consistent with finite differences") {
  std::mt19937_64 rng(42);
  const ScalarField poly = ScalarField::polynomial(2, {{0.25, {4, 0}}, {-1.5, {1, 2}}, {2.0, {0, 0}}});
  const ScalarField ex = ScalarField::exponential(0.5, (Vec(2) << 2.0, -1.0).finished());
  const ScalarField bump = ScalarField::bump((Vec(2) << 0.3, -0.2).finished(), 1.7, 0.8);
  const ScalarField sum = poly + 2.0 * ex - bump + ScalarField::affine((Vec(2) << 1.0, -3.0).finished(), 4.0);
  for (int k = 0; k < 100; ++k) {
    const Vec xi = fixtures::random_point(rng, 2, 1.5);
    for (const auto* f : {&poly, &ex, &bump, &sum}) check_consistency(*f, xi, 1e-4, 1e-6);
  }
}

TEST_CASE("bump is compactly supported and C2") {
  const Vec c = (Vec(2) << 1.0, 2.0).finished();
  const ScalarField b = ScalarField::bump(c, 0.5, 3.0);
  CHECK(b.value(c) == doctest::Approx(3.0));
  const Vec out = (Vec(2) << 1.5, 2.0).finished();
  CHECK(b.value(out) == 0.0);
  CHECK(b.gradient(out).norm() == 0.0);
  CHECK(b.hessian(out).norm() == 0.0);
  const Vec inside = (Vec(2) << 1.5 - 1e-7, 2.0).finished();
  CHECK(b.hessian(inside).norm() < 1e-3);
}

TEST_CASE("field arithmetic is linear") {
  const ScalarField f = ScalarField::polynomial(1, {{1.0, {3}}});
  const ScalarField g = ScalarField::exponential(2.0, (Vec(1) << -1.0).finished());
  const ScalarField h = 3.0 * f - g + f;
  Vec xi(1);
  xi[0] = 0.7;
  CHECK(h.value(xi) == doctest::Approx(4 * std::pow(0.7, 3) - 2 * std::exp(-0.7)));
  CHECK(h.gradient(xi)[0] == doctest::Approx(12 * 0.49 + 2 * std::exp(-0.7)));
  CHECK(h.hessian(xi)(0, 0) == doctest::Approx(24 * 0.7 - 2 * std::exp(-0.7)));
}

TEST_CASE("lattice sums: shifted evaluation stays finite far out, unshifted overflows") {
  std::vector<LatticeVec> pts{{0}, {1}};
  const ScalarField shifted(std::make_shared<LatticeSumForm>(pts, std::vector<LatticeSumForm::Term>{{1.0, {1.0, 1.0}}}));
  const ScalarField raw(
      std::make_shared<LatticeSumForm>(pts, std::vector<LatticeSumForm::Term>{{1.0, {1.0, 1.0}}}, false));
  Vec xi(1);
  xi[0] = 400.0;  // e^{800} overflows a double
  CHECK(shifted.value(xi) == doctest::Approx(400.0));
  CHECK(shifted.gradient(xi)[0] == doctest::Approx(1.0));
  try {
    raw.value(xi);
    FAIL("expected NumericOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericOverflow);
  }
  xi[0] = -300.0;
  CHECK(shifted.value(xi) == doctest::Approx(0.0));
  xi[0] = 0.3;
  CHECK(raw.value(xi) == doctest::Approx(shifted.value(xi)).epsilon(1e-15));
}
