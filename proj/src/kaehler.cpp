#include "syzlab/kaehler.hpp"

#include <cmath>

#include "syzlab/errors.hpp"

namespace syzlab::kaehler {

ToricPotential::ToricPotential(std::shared_ptr<const toric::Polytope> polytope, std::vector<LatticeVec> points,
                               std::vector<double> weights)
    : polytope_(std::move(polytope)),
      points_(std::move(points)),
      weights_(std::move(weights)),
      field_(std::make_shared<LatticeSumForm>(points_, std::vector<LatticeSumForm::Term>{{1.0, weights_}})) {}

std::shared_ptr<const ToricPotential> ToricPotential::make(std::shared_ptr<const toric::Polytope> polytope,
                                                           std::optional<std::vector<double>> weights) {
  auto points = polytope->lattice_points();
  std::vector<double> c = weights.value_or(std::vector<double>(points.size(), 1.0));
  if (c.size() != points.size()) throw Error(ErrorCode::InvalidInput, "one weight per lattice point required");
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (!(c[p] >= 0.0) || !std::isfinite(c[p]))
      throw Error(ErrorCode::InvalidInput, "weights must be finite and nonnegative");
  }
  // Vertices must keep positive weight so phi has the right asymptotics along every cone.
  for (const auto& v : polytope->vertices()) {
    for (std::size_t p = 0; p < points.size(); ++p)
      if (points[p] == v && c[p] <= 0.0)
        throw Error(ErrorCode::InvalidInput, "weight at vertex " + toric::format_lattice(v) + " must be positive");
  }
  return std::shared_ptr<const ToricPotential>(new ToricPotential(std::move(polytope), std::move(points), std::move(c)));
}

Vec ToricPotential::moment_map(const Vec& xi) const {
  Vec mu = gradient(xi);
  const double slack = 1e-12;
  if (polytope_->min_facet_value(mu) < -slack)
    throw Error(ErrorCode::OutsidePolytope, "moment map left the polytope; check the weights");
  return mu;
}

std::vector<double> weights_from_map(const toric::Polytope& polytope, const std::map<LatticeVec, double>& overrides) {
  const auto points = polytope.lattice_points();
  std::vector<double> c(points.size(), 1.0);
  std::size_t used = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (auto it = overrides.find(points[p]); it != overrides.end()) {
      c[p] = it->second;
      ++used;
    }
  }
  if (used != overrides.size()) throw Error(ErrorCode::InvalidInput, "weight given for a point outside the polytope");
  return c;
}

LegendrePair::LegendrePair(std::shared_ptr<const ToricPotential> potential, LegendreOptions options)
    : potential_(std::move(potential)), options_(options) {}

Vec LegendrePair::inverse(const Vec& x) const {
  const auto& poly = potential_->polytope();
  if (x.size() != poly.dim()) throw Error(ErrorCode::InvalidInput, "point has wrong dimension");
  if (poly.min_facet_value(x) < options_.margin)
    throw Error(ErrorCode::BoundaryPoint, "point is within the boundary margin of the polytope");

  const ScalarField& phi = potential_->field();
  auto objective = [&](const Vec& xi) { return phi.value(xi) - x.dot(xi); };
  Vec xi = Vec::Zero(x.size());
  for (int it = 0; it < options_.max_iterations; ++it) {
    const Jet j = phi.jet(xi, 2);
    const Vec r = j.grad - x;
    const double rnorm = r.norm();
    const Vec step = -j.hess.ldlt().solve(r);
    if (rnorm <= options_.tolerance) {
      // xi error after the test is about rnorm / lambda_min(Hess phi); one full step removes it.
      const Vec polished = xi + step;
      return (phi.gradient(polished) - x).norm() <= rnorm ? polished : xi;
    }
    const Vec full = xi + step;
    if ((phi.gradient(full) - x).norm() <= 0.5 * rnorm) {
      xi = full;
      continue;
    }
    const double f0 = j.value - x.dot(xi);
    const double slope = r.dot(step);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-12) {
      const Vec trial = xi + alpha * step;
      if (trial != xi && objective(trial) < f0 + 1e-4 * alpha * slope) {
        xi = trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if ((phi.gradient(xi) - x).norm() <= options_.tolerance) return xi;
  throw Error(ErrorCode::NoConvergence, "Legendre inversion did not reach the tolerance");
}

Mat LegendrePair::psi_hessian(const Vec& x) const {
  const Mat h = potential_->hessian(inverse(x));
  return h.inverse();
}

}  // namespace syzlab::kaehler
