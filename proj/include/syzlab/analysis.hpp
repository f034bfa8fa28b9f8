#pragma once

#include <memory>
#include <vector>

#include "syzlab/field.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/section.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::analysis {

/// (1 / Vol P) sum_k a_k vol_lat(F_k)
double slope_topological(const toric::Polytope& polytope, const LatticeVec& a);

struct QuadratureOptions {
  double half_width = 14.0;  // clipped to the grid box for grid sections
  double panel = 1.0;        // initial panel width
  int order = 8;             // Gauss-Legendre points per panel and axis
  double tolerance = 1e-4;   // agreement between successive refinements
  int max_refinements = 3;
  int threads = 1;
};

/// (1 / Vol P) int_P div_x y dx, evaluated in xi-coordinates as
/// int tr(adj(Hess phi) Hess g) dxi on [-R, R]^n. Throws QuadratureFailure
/// when refinements do not settle.
double slope_quadrature(const syz::LagrangianSection& s, const QuadratureOptions& options = {});

struct SlopeResult {
  double quadrature = 0.0;
  double topological = 0.0;
  double volume = 0.0;
  std::vector<double> facet_contributions;  // a_k vol_lat(F_k)
};

SlopeResult slope(const syz::LagrangianSection& s, const LatticeVec& a, const QuadratureOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct HarmonicOptions {
  double half_width = 8.0;
  int resolution = 129;
  double residual_bound = 1e-1;  // on the interior residual
  double interior_margin = 1.0;  // interior residual is taken on |xi|_inf <= T - margin
  int threads = 1;
};

struct HarmonicSolution {
  std::shared_ptr<const kaehler::ToricPotential> geometry;
  LatticeVec divisor;
  ScalarField correction = ScalarField::zero(1);  // f on the grid, f(0) = 0
  ScalarField potential = ScalarField::zero(1);   // g_{h0,a} + f
  double lambda = 0.0;
  double discrete_residual = 0.0;  // max-norm of the assembled linear system
  double interior_residual = 0.0;  // max |tr(Hess phi^{-1} Hess g) - lambda| at interior cell midpoints
  double half_width = 0.0;
  int resolution = 0;
  double h = 0.0;
  std::vector<double> samples;  // f at the nodes, row-major

  syz::LagrangianSection section() const;
};

/// Solves sum phi^{jk} g_{jk} = lambda for g = g_{h0,a} + f with zero
/// normal derivative of f on the box, f(0) = 0 and lambda unknown.
/// Throws SolverFailure or ResidualTooLarge.
HarmonicSolution harmonic_solve(std::shared_ptr<const kaehler::ToricPotential> geometry, const LatticeVec& a,
                                const HarmonicOptions& options = {});

/// Cell-midpoint sample set used for interior residuals.
std::vector<Vec> interior_midpoints(int dim, double half_width, int resolution, double margin);

struct SlagOptions {
  int per_axis = 41;
  double margin = 1e-2;  // minimum facet value of sampled x
  int threads = 1;
};

struct SlagResult {
  std::vector<Vec> points;  // x in the polytope
  std::vector<double> residuals;
  double max_norm = 0.0;
};

/// Im(e^{i theta} det(I - i dy/dx)) with dy/dx = Hess g (Hess phi)^{-1} at xi = Psi(x).
SlagResult slag_residual(const syz::LagrangianSection& s, double theta, const SlagOptions& options = {});

/// Section with potential eps * g; the divisor representative is dropped.
syz::LagrangianSection fiber_rescale(const syz::LagrangianSection& s, double eps);

}  // namespace syzlab::analysis
