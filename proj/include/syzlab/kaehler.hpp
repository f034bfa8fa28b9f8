#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "syzlab/field.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::kaehler {

/// phi(xi) = 1/2 log sum_u c_u e^{2<u, xi>} over the lattice points of the
/// polytope. Its gradient is the moment map and its Hessian the metric.
class ToricPotential {
 public:
  /// Default weights are c_u = 1. Explicit weights must be nonnegative and
  /// positive at every vertex.
  static std::shared_ptr<const ToricPotential> make(std::shared_ptr<const toric::Polytope> polytope,
                                                    std::optional<std::vector<double>> weights = std::nullopt);

  const toric::Polytope& polytope() const { return *polytope_; }
  const std::shared_ptr<const toric::Polytope>& polytope_ptr() const { return polytope_; }
  int dim() const { return polytope_->dim(); }
  const std::vector<LatticeVec>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  /// phi as a lattice-sum field.
  const ScalarField& field() const { return field_; }

  double value(const Vec& xi) const { return field_.value(xi); }
  Vec gradient(const Vec& xi) const { return field_.gradient(xi); }
  Mat hessian(const Vec& xi) const { return field_.hessian(xi); }

  /// mu(xi) = d phi(xi); throws OutsidePolytope if the result leaves the
  /// closed polytope beyond rounding.
  Vec moment_map(const Vec& xi) const;

 private:
  ToricPotential(std::shared_ptr<const toric::Polytope> polytope, std::vector<LatticeVec> points,
                 std::vector<double> weights);

  std::shared_ptr<const toric::Polytope> polytope_;
  std::vector<LatticeVec> points_;
  std::vector<double> weights_;
  ScalarField field_;
};

/// Builds a weight vector from a map "lattice point -> weight"; points not in
/// the map keep weight 1.
std::vector<double> weights_from_map(const toric::Polytope& polytope, const std::map<LatticeVec, double>& overrides);

struct LegendreOptions {
  double tolerance = 1e-12;  // on |Phi(xi) - x|
  double margin = 1e-6;      // minimum l_i(x) accepted by the inverse
  int max_iterations = 200;
};

/// The gradient diffeomorphism Phi = d phi : N_R -> P and its inverse Psi.
class LegendrePair {
 public:
  explicit LegendrePair(std::shared_ptr<const ToricPotential> potential, LegendreOptions options = {});

  const ToricPotential& potential() const { return *potential_; }
  const LegendreOptions& options() const { return options_; }

  Vec forward(const Vec& xi) const { return potential_->moment_map(xi); }

  /// Psi(x) by damped Newton on the strictly convex function phi(xi) - <x, xi>.
  /// Throws BoundaryPoint if min_i l_i(x) < margin, NoConvergence otherwise.
  Vec inverse(const Vec& x) const;

  /// Hess psi(x) = (Hess phi(Psi(x)))^{-1}
  Mat psi_hessian(const Vec& x) const;

 private:
  std::shared_ptr<const ToricPotential> potential_;
  LegendreOptions options_;
};

}  // namespace syzlab::kaehler
