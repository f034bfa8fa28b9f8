#pragma once

#include <memory>
#include <optional>

#include "syzlab/field.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::metrics {

/// Potential of the Guillemin metric h_0 on O(D_a):
///   g = -1/2 sum_i a_i log( sum_u c_u l_i(u) e^{2<u,xi>} / sum_u c_u e^{2<u,xi>} ),
/// stored as the lattice sum (sum_i a_i) phi - sum_i a_i phi_i with
/// phi_i = 1/2 log sum_u c_u l_i(u) e^{2<u,xi>}.
ScalarField guillemin_field(const kaehler::ToricPotential& potential, const LatticeVec& divisor);

double guillemin_eval(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi);
Vec guillemin_grad(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi);
Mat guillemin_hess(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi);

/// -1/2 sum_i a_i log l_i(mu(xi)), evaluated through the moment map.
double guillemin_via_moment_map(const kaehler::ToricPotential& potential, const LatticeVec& divisor, const Vec& xi);

/// A T_N-invariant hermitian metric, g_h = g_{h_0, a} + f.
class MetricPotential {
 public:
  MetricPotential(std::shared_ptr<const kaehler::ToricPotential> geometry, LatticeVec divisor,
                  std::optional<ScalarField> correction = std::nullopt);

  const kaehler::ToricPotential& geometry() const { return *geometry_; }
  const std::shared_ptr<const kaehler::ToricPotential>& geometry_ptr() const { return geometry_; }
  const LatticeVec& divisor() const { return divisor_; }
  const ScalarField& correction() const { return correction_; }
  const ScalarField& total() const { return total_; }
  toric::PicardClass picard_class() const;

 private:
  std::shared_ptr<const kaehler::ToricPotential> geometry_;
  LatticeVec divisor_;
  ScalarField correction_;
  ScalarField total_;
};

/// Hess g_h at xi: the curvature form's coefficients in d(xi) ^ du.
Mat curvature_matrix(const MetricPotential& metric, const Vec& xi);

/// sum_{jk} phi^{jk} (g_h)_{jk} - lambda
double he_residual(const MetricPotential& metric, double lambda, const Vec& xi);

}  // namespace syzlab::metrics
