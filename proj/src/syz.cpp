#include "syzlab/syz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "syzlab/errors.hpp"

namespace syzlab::syz {

LagrangianSection::LagrangianSection(std::shared_ptr<const kaehler::ToricPotential> geometry, ScalarField potential,
                                     std::optional<LatticeVec> representative)
    : geometry_(std::move(geometry)), potential_(std::move(potential)), representative_(std::move(representative)) {
  if (!geometry_) throw Error(ErrorCode::InvalidInput, "section needs a geometry");
  if (potential_.dim() != geometry_->dim()) throw Error(ErrorCode::InvalidInput, "section potential has wrong dimension");
  if (representative_ && static_cast<int>(representative_->size()) != fan().num_rays())
    throw Error(ErrorCode::InvalidInput, "representative needs one entry per ray");
}

std::optional<toric::PicardClass> LagrangianSection::picard_class() const {
  if (!representative_) return std::nullopt;
  return toric::picard_reduce(fan(), *representative_);
}

LagrangianSection transform(const metrics::MetricPotential& metric) {
  return LagrangianSection(metric.geometry_ptr(), metric.total(), metric.divisor());
}

Inversion invert(const LagrangianSection& s, const growth::GrowthOptions& options) {
  auto inference = growth::infer_class(s, options);
  if (!inference)
    throw Error(ErrorCode::NotExtendable, "no divisor representative satisfies the growth condition");
  const auto& a = inference->representative;
  ScalarField correction = s.potential() - metrics::guillemin_field(s.geometry(), a);
  metrics::MetricPotential metric(s.geometry_ptr(), a, std::move(correction));
  return Inversion{std::move(metric), std::move(*inference)};
}

metrics::MetricPotential inverse_transform(const LagrangianSection& s, const growth::GrowthOptions& options) {
  return invert(s, options).metric;
}

LagrangianSection lift_shift(const LagrangianSection& s, const LatticeVec& u) {
  if (static_cast<int>(u.size()) != s.geometry().dim()) throw Error(ErrorCode::InvalidInput, "shift has wrong dimension");
  ScalarField potential = s.potential() - ScalarField::affine(to_vec(u), 0.0);
  std::optional<LatticeVec> a = s.representative();
  if (a) {
    const LatticeVec shift = toric::iota(s.fan(), u);
    for (std::size_t i = 0; i < a->size(); ++i) (*a)[i] += shift[i];
  }
  return LagrangianSection(s.geometry_ptr(), std::move(potential), std::move(a));
}

Vec section_over_polytope(const LagrangianSection& s, const kaehler::LegendrePair& legendre, const Vec& x) {
  return s.section_map(legendre.inverse(x));
}

std::vector<Vec> box_grid(int dim, double half_width, int per_axis) {
  if (per_axis < 2) throw Error(ErrorCode::InvalidInput, "box grid needs at least two samples per axis");
  const double h = 2.0 * half_width / (per_axis - 1);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(per_axis);
  std::vector<Vec> out;
  out.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t p = 0; p < total; ++p) {
    Vec xi(dim);
    for (int d = 0; d < dim; ++d) xi[d] = -half_width + h * idx[static_cast<std::size_t>(d)];
    out.push_back(std::move(xi));
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < per_axis) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return out;
}

AffineFit affine_gauge_fit(const ScalarField& f, double half_width, int per_axis) {
  const int n = f.dim();
  const auto points = box_grid(n, half_width, per_axis);
  Mat design(static_cast<Eigen::Index>(points.size()), n + 1);
  Vec values(static_cast<Eigen::Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto r = static_cast<Eigen::Index>(p);
    design.row(r).head(n) = points[p].transpose();
    design(r, n) = 1.0;
    values[r] = f.value(points[p]);
  }
  const Vec coef = design.colPivHouseholderQr().solve(values);
  AffineFit fit;
  fit.linear = coef.head(n);
  fit.constant = coef[n];
  fit.max_deviation = (design * coef - values).cwiseAbs().maxCoeff();
  return fit;
}

double max_section_difference(const ScalarField& a, const ScalarField& b, double half_width, int per_axis) {
  double worst = 0.0;
  for (const auto& xi : box_grid(a.dim(), half_width, per_axis))
    worst = std::max(worst, (a.gradient(xi) - b.gradient(xi)).cwiseAbs().maxCoeff());
  return worst;
}

double curl_defect(const LagrangianSection& s, double half_width, int per_axis, double h) {
  const int n = s.geometry().dim();
  double worst = 0.0;
  for (const auto& xi : box_grid(n, half_width, per_axis)) {
    Mat jac(n, n);
    for (int k = 0; k < n; ++k) {
      Vec e = Vec::Zero(n);
      e[k] = h;
      jac.col(k) = (s.section_map(xi + e) - s.section_map(xi - e)) / (2.0 * h);
    }
    worst = std::max(worst, (jac - jac.transpose()).cwiseAbs().maxCoeff() / 2.0);
  }
  return worst;
}

namespace {

void write_header(std::ostream& out, const char* coord, int n) {
  for (int j = 0; j < n; ++j) out << coord << j + 1 << ',';
  for (int j = 0; j < n; ++j) out << 'y' << j + 1 << (j + 1 < n ? ',' : '\n');
}

void write_row(std::ostream& out, const Vec& p, const Vec& y) {
  for (Eigen::Index j = 0; j < p.size(); ++j) out << p[j] << ',';
  for (Eigen::Index j = 0; j < y.size(); ++j) out << y[j] << (j + 1 < y.size() ? ',' : '\n');
}

}  // namespace

void write_section_csv(const LagrangianSection& s, const SectionGrid& grid, std::ostream& xi_out, std::ostream& x_out) {
  const int n = s.geometry().dim();
  const auto precision_xi = xi_out.precision(17);
  const auto precision_x = x_out.precision(17);
  write_header(xi_out, "xi", n);
  for (const auto& xi : box_grid(n, grid.half_width, grid.xi_per_axis)) write_row(xi_out, xi, s.section_map(xi));

  const auto& poly = s.geometry().polytope();
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& v : poly.vertices()) {
    lo = lo.cwiseMin(to_vec(v));
    hi = hi.cwiseMax(to_vec(v));
  }
  kaehler::LegendreOptions lopts;
  lopts.margin = std::min(lopts.margin, grid.margin);
  kaehler::LegendrePair legendre(s.geometry_ptr(), lopts);
  write_header(x_out, "x", n);
  const Vec center = (lo + hi) / 2.0;
  const double half = (hi - lo).maxCoeff() / 2.0;
  for (const auto& unit : box_grid(n, 1.0, grid.x_per_axis)) {
    const Vec x = center + half * unit;
    if (poly.min_facet_value(x) < grid.margin) continue;
    write_row(x_out, x, section_over_polytope(s, legendre, x));
  }
  xi_out.precision(precision_xi);
  x_out.precision(precision_x);
}

}  // namespace syzlab::syz
