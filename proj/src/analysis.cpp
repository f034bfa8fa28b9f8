#include "syzlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "syzlab/errors.hpp"
#include "syzlab/metrics.hpp"
#include "syzlab/parallel.hpp"
#include "syzlab/syz.hpp"

namespace syzlab::analysis {

double slope_topological(const toric::Polytope& polytope, const LatticeVec& a) {
  if (static_cast<int>(a.size()) != polytope.num_facets())
    throw Error(ErrorCode::InvalidInput, "a needs one entry per facet");
  double total = 0.0;
  for (int k = 0; k < polytope.num_facets(); ++k)
    total += static_cast<double>(a[static_cast<std::size_t>(k)]) *
             polytope.facet_lattice_volumes()[static_cast<std::size_t>(k)];
  return total / polytope.volume();
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw Error(ErrorCode::InvalidInput, "quadrature order must be positive");
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
}

namespace {

/// tr(adj(A) B)
double adjugate_trace(const Mat& A, const Mat& B) {
  const auto n = A.rows();
  if (n == 1) return B(0, 0);
  if (n == 2) return A(1, 1) * B(0, 0) + A(0, 0) * B(1, 1) - A(0, 1) * B(1, 0) - A(1, 0) * B(0, 1);
  Eigen::PartialPivLU<Mat> lu(A);
  return lu.determinant() * (lu.solve(B)).trace();
}

double tensor_quadrature(const ScalarField& phi, const ScalarField& g, double R, int panels, int order, int threads) {
  const int n = phi.dim();
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  const double width = 2.0 * R / panels;
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    const double mid = -R + (p + 0.5) * width;
    for (int q = 0; q < order; ++q) {
      nodes.push_back(mid + 0.5 * width * gx[static_cast<std::size_t>(q)]);
      weights.push_back(0.5 * width * gw[static_cast<std::size_t>(q)]);
    }
  }
  const std::size_t per_axis = nodes.size();
  std::size_t inner = 1;
  for (int d = 1; d < n; ++d) inner *= per_axis;
  std::vector<double> partial(per_axis, 0.0);
  parallel_for(per_axis, threads, [&](std::size_t i0) {
    double acc = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    idx[0] = i0;
    Vec xi(n);
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t rest = r;
      for (int d = n - 1; d >= 1; --d) {
        idx[static_cast<std::size_t>(d)] = rest % per_axis;
        rest /= per_axis;
      }
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        xi[d] = nodes[idx[static_cast<std::size_t>(d)]];
        w *= weights[idx[static_cast<std::size_t>(d)]];
      }
      acc += w * adjugate_trace(phi.hessian(xi), g.hessian(xi));
    }
    partial[i0] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

double slope_quadrature(const syz::LagrangianSection& s, const QuadratureOptions& options) {
  const ScalarField& phi = s.geometry().field();
  const ScalarField& g = s.potential();
  double R = options.half_width;
  if (auto box = g.grid_box()) R = std::min(R, *box);
  int panels = std::max(1, static_cast<int>(std::ceil(2.0 * R / options.panel)));
  double previous = tensor_quadrature(phi, g, R, panels, options.order, options.threads);
  for (int level = 0; level < options.max_refinements; ++level) {
    panels *= 2;
    const double current = tensor_quadrature(phi, g, R, panels, options.order, options.threads);
    if (std::abs(current - previous) <= options.tolerance * std::max(1.0, std::abs(current)))
      return current / s.geometry().polytope().volume();
    previous = current;
  }
  throw Error(ErrorCode::QuadratureFailure, "slope quadrature did not settle under refinement");
}

SlopeResult slope(const syz::LagrangianSection& s, const LatticeVec& a, const QuadratureOptions& options) {
  const auto& poly = s.geometry().polytope();
  SlopeResult out;
  out.quadrature = slope_quadrature(s, options);
  out.topological = slope_topological(poly, a);
  out.volume = poly.volume();
  for (int k = 0; k < poly.num_facets(); ++k)
    out.facet_contributions.push_back(static_cast<double>(a[static_cast<std::size_t>(k)]) *
                                      poly.facet_lattice_volumes()[static_cast<std::size_t>(k)]);
  return out;
}

syz::LagrangianSection HarmonicSolution::section() const {
  return syz::LagrangianSection(geometry, potential, divisor);
}

std::vector<Vec> interior_midpoints(int dim, double half_width, int resolution, double margin) {
  const double h = 2.0 * half_width / (resolution - 1);
  const double limit = half_width - margin;
  std::vector<double> axis;
  for (int i = 0; i + 1 < resolution; ++i) {
    const double x = -half_width + (i + 0.5) * h;
    if (std::abs(x) <= limit) axis.push_back(x);
  }
  std::vector<Vec> out;
  if (axis.empty()) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  for (;;) {
    Vec xi(dim);
    for (int d = 0; d < dim; ++d) xi[d] = axis[idx[static_cast<std::size_t>(d)]];
    out.push_back(std::move(xi));
    int d = dim - 1;
    for (; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < axis.size()) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d < 0) break;
  }
  return out;
}

HarmonicSolution harmonic_solve(std::shared_ptr<const kaehler::ToricPotential> geometry, const LatticeVec& a,
                                const HarmonicOptions& options) {
  const int n = geometry->dim();
  const int N = options.resolution;
  if (N < 5 || N % 2 == 0) throw Error(ErrorCode::InvalidInput, "harmonic grid needs an odd resolution >= 5");
  if (!(options.half_width > 0.0)) throw Error(ErrorCode::InvalidInput, "harmonic box must be positive");
  const double T = options.half_width;
  const double h = 2.0 * T / (N - 1);
  std::size_t nodes = 1;
  for (int d = 0; d < n; ++d) nodes *= static_cast<std::size_t>(N);
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int d = n - 2; d >= 0; --d)
    stride[static_cast<std::size_t>(d)] = stride[static_cast<std::size_t>(d + 1)] * static_cast<std::size_t>(N);

  const ScalarField g0 = metrics::guillemin_field(*geometry, a);
  const ScalarField& phi = geometry->field();

  auto coords = [&](std::size_t p, std::vector<int>& idx, Vec& xi) {
    for (int d = 0; d < n; ++d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>((p / stride[static_cast<std::size_t>(d)]) % N);
      xi[d] = -T + h * idx[static_cast<std::size_t>(d)];
    }
  };

  // Coefficients phi^{jk} and source rho_0 = tr(phi^{-1} Hess g_{h0}) per node.
  std::vector<Mat> coef(nodes);
  std::vector<double> rho(nodes);
  parallel_for(nodes, options.threads, [&](std::size_t p) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    Vec xi(n);
    coords(p, idx, xi);
    const Mat inv = phi.hessian(xi).inverse();
    coef[p] = inv;
    rho[p] = (inv * g0.hessian(xi)).trace();
  });

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> triplets;
  triplets.reserve(nodes * static_cast<std::size_t>(1 + 2 * n + 4 * n * n));
  const auto unknowns = static_cast<Eigen::Index>(nodes + 1);
  const auto lambda_col = static_cast<Eigen::Index>(nodes);
  Vec rhs = Vec::Zero(unknowns);
  auto reflect = [N](int i) { return i < 0 ? -i : (i >= N ? 2 * (N - 1) - i : i); };
  std::vector<int> idx(static_cast<std::size_t>(n));
  Vec xi(n);
  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t p = 0; p < nodes; ++p) {
    coords(p, idx, xi);
    const auto row = static_cast<Eigen::Index>(p);
    // Neighbour index after shifting up to two axes; ghost nodes reflect across the box face.
    auto at = [&](int d1, int s1, int d2, int s2) {
      std::size_t q = p;
      for (auto [d, s] : {std::pair{d1, s1}, std::pair{d2, s2}}) {
        if (d < 0) continue;
        const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
        const auto j = static_cast<std::size_t>(reflect(static_cast<int>(i) + s));
        q = q - i * stride[static_cast<std::size_t>(d)] + j * stride[static_cast<std::size_t>(d)];
      }
      return static_cast<Eigen::Index>(q);
    };
    const Mat& A = coef[p];
    for (int j = 0; j < n; ++j) {
      const double c = A(j, j) * inv_h2;
      triplets.emplace_back(row, at(j, 1, -1, 0), c);
      triplets.emplace_back(row, at(j, -1, -1, 0), c);
      triplets.emplace_back(row, row, -2.0 * c);
      for (int k = j + 1; k < n; ++k) {
        const double m = 2.0 * A(j, k) * inv_h2 / 4.0;
        triplets.emplace_back(row, at(j, 1, k, 1), m);
        triplets.emplace_back(row, at(j, 1, k, -1), -m);
        triplets.emplace_back(row, at(j, -1, k, 1), -m);
        triplets.emplace_back(row, at(j, -1, k, -1), m);
      }
    }
    triplets.emplace_back(row, lambda_col, -1.0);
    rhs[row] = -rho[p];
  }
  std::size_t center = 0;
  for (int d = 0; d < n; ++d) center += static_cast<std::size_t>((N - 1) / 2) * stride[static_cast<std::size_t>(d)];
  triplets.emplace_back(lambda_col, static_cast<Eigen::Index>(center), 1.0);

  Eigen::SparseMatrix<double> system(unknowns, unknowns);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "sparse factorization failed: " + lu.lastErrorMessage());
  const Vec sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite()) throw Error(ErrorCode::SolverFailure, "sparse solve failed");

  HarmonicSolution out;
  out.geometry = geometry;
  out.divisor = a;
  out.lambda = sol[lambda_col];
  out.discrete_residual = (system * sol - rhs).cwiseAbs().maxCoeff();
  out.half_width = T;
  out.resolution = N;
  out.h = h;
  out.samples.assign(sol.data(), sol.data() + nodes);
  out.correction = ScalarField::grid(TensorSpline(n, T, N, out.samples, TensorSpline::EndSlope::Zero));
  out.potential = g0 + out.correction;

  const auto mids = interior_midpoints(n, T, N, options.interior_margin);
  std::vector<double> res(mids.size(), 0.0);
  const ScalarField& f = out.correction;
  parallel_for(mids.size(), options.threads, [&](std::size_t m) {
    const Mat inv = phi.hessian(mids[m]).inverse();
    res[m] = std::abs((inv * (g0.hessian(mids[m]) + f.hessian(mids[m]))).trace() - out.lambda);
  });
  out.interior_residual = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
  if (!(out.interior_residual <= options.residual_bound))
    throw Error(ErrorCode::ResidualTooLarge, "interior residual " + std::to_string(out.interior_residual) +
                                                 " exceeds the bound " + std::to_string(options.residual_bound));
  return out;
}

SlagResult slag_residual(const syz::LagrangianSection& s, double theta, const SlagOptions& options) {
  const int n = s.geometry().dim();
  const auto& poly = s.geometry().polytope();
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& v : poly.vertices()) {
    lo = lo.cwiseMin(to_vec(v));
    hi = hi.cwiseMax(to_vec(v));
  }
  SlagResult out;
  for (const auto& unit : syz::box_grid(n, 1.0, options.per_axis)) {
    const Vec x = (lo + hi) / 2.0 + ((hi - lo) / 2.0).cwiseProduct(unit);
    if (poly.min_facet_value(x) >= options.margin) out.points.push_back(x);
  }
  kaehler::LegendreOptions lopts;
  lopts.margin = std::min(lopts.margin, options.margin);
  kaehler::LegendrePair legendre(s.geometry_ptr(), lopts);
  const std::complex<double> phase = std::polar(1.0, theta);
  out.residuals.assign(out.points.size(), 0.0);
  parallel_for(out.points.size(), options.threads, [&](std::size_t p) {
    const Vec xi = legendre.inverse(out.points[p]);
    const Mat J = s.potential().hessian(xi) * s.geometry().hessian(xi).inverse();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n) - std::complex<double>(0.0, 1.0) * J.cast<std::complex<double>>();
    out.residuals[p] = (phase * M.determinant()).imag();
  });
  for (double r : out.residuals) out.max_norm = std::max(out.max_norm, std::abs(r));
  return out;
}

syz::LagrangianSection fiber_rescale(const syz::LagrangianSection& s, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "fiber rescaling needs eps > 0");
  if (eps == 1.0) return s;
  return syz::LagrangianSection(s.geometry_ptr(), eps * s.potential());
}

}  // namespace syzlab::analysis
