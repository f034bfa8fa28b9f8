#include "syzlab/metrics.hpp"

#include <cmath>
#include <numeric>

#include "syzlab/errors.hpp"

namespace syzlab::metrics {

ScalarField guillemin_field(const kaehler::ToricPotential& potential, const LatticeVec& divisor) {
  const auto& poly = potential.polytope();
  if (static_cast<int>(divisor.size()) != poly.num_facets())
    throw Error(ErrorCode::InvalidInput, "divisor must have one entry per facet");
  const auto& points = potential.points();
  const auto& c = potential.weights();

  std::vector<LatticeSumForm::Term> terms;
  const auto total = std::accumulate(divisor.begin(), divisor.end(), std::int64_t{0});
  if (total != 0) terms.push_back({static_cast<double>(total), c});
  for (int i = 0; i < poly.num_facets(); ++i) {
    if (divisor[i] == 0) continue;
    std::vector<double> w(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) w[p] = c[p] * static_cast<double>(poly.facet_value(i, points[p]));
    terms.push_back({-static_cast<double>(divisor[i]), std::move(w)});
  }
  if (terms.empty()) return ScalarField::zero(poly.dim());
  return ScalarField(std::make_shared<LatticeSumForm>(points, std::move(terms)));
}

double guillemin_eval(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi) {
  return guillemin_field(potential, divisor).value(xi);
}

Vec guillemin_grad(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi) {
  return guillemin_field(potential, divisor).gradient(xi);
}

Mat guillemin_hess(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi) {
  return guillemin_field(potential, divisor).hessian(xi);
}

double guillemin_via_moment_map(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi) {
  const Vec mu = potential.moment_map(xi);
  double g = 0.0;
  for (int i = 0; i < potential.polytope().num_facets(); ++i)
    if (divisor[i] != 0) g -= 0.5 * static_cast<double>(divisor[i]) * std::log(potential.polytope().facet_value(i, mu));
  return g;
}

MetricPotential::MetricPotential(std::shared_ptr<const kaehler::ToricPotential> geometry, LatticeVec divisor,
                                 std::optional<ScalarField> correction)
    : geometry_(std::move(geometry)),
      divisor_(std::move(divisor)),
      correction_(correction.value_or(ScalarField::zero(geometry_->dim()))),
      total_(guillemin_field(*geometry_, divisor_) + correction_) {
  if (correction_.dim() != geometry_->dim()) throw Error(ErrorCode::InvalidInput, "correction has wrong dimension");
}

toric::PicardClass MetricPotential::picard_class() const {
  return toric::picard_reduce(geometry_->polytope().fan(), divisor_);
}

Mat curvature_matrix(const MetricPotential& metric, const Vec& xi) { return metric.total().hessian(xi); }

double he_residual(const MetricPotential& metric, double lambda, const Vec& xi) {
  const Mat metric_hess = metric.geometry().hessian(xi);
  const Mat curvature = curvature_matrix(metric, xi);
  return metric_hess.ldlt().solve(curvature).trace() - lambda;
}

}  // namespace syzlab::metrics
