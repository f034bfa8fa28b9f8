#pragma once

#include <iosfwd>

#include "syzlab/growth.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/metrics.hpp"
#include "syzlab/section.hpp"

namespace syzlab::syz {

/// y = dg_h; the section remembers the divisor representative of the metric.
LagrangianSection transform(const metrics::MetricPotential& metric);

struct Inversion {
  metrics::MetricPotential metric;
  growth::ClassInference inference;
};

/// Metric with divisor from infer_class and correction g - g_{h0,a}.
/// Throws NotExtendable when no representative passes the growth check.
metrics::MetricPotential inverse_transform(const LagrangianSection& s, const growth::GrowthOptions& options = {});
Inversion invert(const LagrangianSection& s, const growth::GrowthOptions& options = {});

/// Potential g - <u, xi>, representative a + iota(u).
LagrangianSection lift_shift(const LagrangianSection& s, const LatticeVec& u);

/// y(Psi(x)); throws BoundaryPoint near the facets.
Vec section_over_polytope(const LagrangianSection& s, const kaehler::LegendrePair& legendre, const Vec& x);

/// Uniform sample grid on [-half_width, half_width]^n, row-major.
std::vector<Vec> box_grid(int dim, double half_width, int per_axis);

struct AffineFit {
  Vec linear;
  double constant = 0.0;
  double max_deviation = 0.0;  // max |f - affine| over the samples
};

/// Least-squares affine function through the samples of f on the box grid.
AffineFit affine_gauge_fit(const ScalarField& f, double half_width, int per_axis);

/// max over the box grid of |y_a - y_b|_inf.
double max_section_difference(const ScalarField& a, const ScalarField& b, double half_width, int per_axis);

/// Largest antisymmetric part of the central-difference Jacobian of y.
double curl_defect(const LagrangianSection& s, double half_width, int per_axis, double h = 1e-4);

struct SectionGrid {
  double half_width = 6.0;
  int xi_per_axis = 41;
  int x_per_axis = 41;
  double margin = 1e-3;  // minimum facet value of exported x points
};

/// Writes (xi, y) and (x, y) samples as CSV with header rows.
void write_section_csv(const LagrangianSection& s, const SectionGrid& grid, std::ostream& xi_out, std::ostream& x_out);

}  // namespace syzlab::syz
