#pragma once

#include <memory>
#include <random>

#include "syzlab/kaehler.hpp"
#include "syzlab/toric.hpp"

namespace fixtures {

using syzlab::LatticeVec;
using syzlab::toric::Fan;

inline Fan cp1_fan() { return Fan{1, {{1}, {-1}}, {{0}, {1}}}; }
inline Fan cp2_fan() { return Fan{2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}}}; }
inline Fan p1xp1_fan() { return Fan{2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }
inline Fan f1_fan() { return Fan{2, {{1, 0}, {0, 1}, {-1, 1}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

inline std::shared_ptr<const syzlab::toric::Polytope> polytope(const Fan& fan, const LatticeVec& offsets) {
  return std::make_shared<const syzlab::toric::Polytope>(syzlab::toric::Polytope::build(fan, offsets));
}

inline std::shared_ptr<const syzlab::kaehler::ToricPotential> geometry(const Fan& fan, const LatticeVec& offsets) {
  return syzlab::kaehler::ToricPotential::make(polytope(fan, offsets));
}

inline auto cp1() { return geometry(cp1_fan(), {0, 1}); }
inline auto cp2() { return geometry(cp2_fan(), {0, 0, 1}); }
inline auto p1xp1() { return geometry(p1xp1_fan(), {0, 0, 1, 1}); }
inline auto f1() { return geometry(f1_fan(), {0, 0, 1, 2}); }

inline syzlab::Vec random_point(std::mt19937_64& rng, int n, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  syzlab::Vec x(n);
  for (int j = 0; j < n; ++j) x[j] = u(rng);
  return x;
}

}  // namespace fixtures
