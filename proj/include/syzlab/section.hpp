#pragma once

#include <memory>
#include <optional>

#include "syzlab/field.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::syz {

/// Lift of a Lagrangian section of Y -> N_R to T*N_R, given by a potential g
/// with y = dg. The representative, when known, is the divisor a for which
/// this particular lift is expected to satisfy the growth condition.
class LagrangianSection {
 public:
  LagrangianSection(std::shared_ptr<const kaehler::ToricPotential> geometry, ScalarField potential,
                    std::optional<LatticeVec> representative = std::nullopt);

  const kaehler::ToricPotential& geometry() const { return *geometry_; }
  const std::shared_ptr<const kaehler::ToricPotential>& geometry_ptr() const { return geometry_; }
  const toric::Fan& fan() const { return geometry_->polytope().fan(); }
  const ScalarField& potential() const { return potential_; }
  const std::optional<LatticeVec>& representative() const { return representative_; }
  std::optional<toric::PicardClass> picard_class() const;

  /// y(xi) = dg(xi)
  Vec section_map(const Vec& xi) const { return potential_.gradient(xi); }

 private:
  std::shared_ptr<const kaehler::ToricPotential> geometry_;
  ScalarField potential_;
  std::optional<LatticeVec> representative_;
};

}  // namespace syzlab::syz
