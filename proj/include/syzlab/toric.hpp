#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "syzlab/types.hpp"

namespace syzlab::toric {

/// A fan in N = Z^n given by its rays and maximal cones. Cone entries are
/// 0-based indices into `generators`.
struct Fan {
  int dim = 0;
  std::vector<LatticeVec> generators;
  std::vector<std::vector<int>> max_cones;

  int num_rays() const { return static_cast<int>(generators.size()); }
  int num_cones() const { return static_cast<int>(max_cones.size()); }
};

struct FanReport {
  std::vector<bool> primitive;                  // per generator
  std::vector<std::int64_t> cone_determinants;  // per maximal cone
  std::vector<bool> cone_smooth;                // |det| == 1
  std::vector<int> unused_generators;           // rays in no maximal cone
  bool complete = false;
  bool exact_completeness = false;  // false when decided by sampling

  bool all_primitive() const;
  bool all_smooth() const;
  bool ok() const { return all_primitive() && all_smooth() && unused_generators.empty() && complete; }
};

/// Checks primitivity, smoothness and completeness. Throws MalformedFan on
/// structural problems (bad indices, duplicate rays, wrong cone sizes).
/// Completeness is exact for n <= 2 and sampled with `seed` otherwise.
FanReport validate_fan(const Fan& fan, std::uint64_t seed = 42);

/// Moment polytope {x : <x, v_i> + lambda_i >= 0} of an ample toric divisor.
class Polytope {
 public:
  /// Builds the polytope; throws NotAmple when some maximal cone does not
  /// yield a vertex strictly inside all other half-spaces.
  static Polytope build(Fan fan, LatticeVec offsets);

  const Fan& fan() const { return fan_; }
  const LatticeVec& offsets() const { return offsets_; }
  int dim() const { return fan_.dim; }
  int num_facets() const { return fan_.num_rays(); }

  /// l_i(x) = <x, v_i> + lambda_i
  double facet_value(int i, const Vec& x) const;
  std::int64_t facet_value(int i, const LatticeVec& u) const;
  double min_facet_value(const Vec& x) const;

  /// vertices()[c] is the vertex dual to maximal cone c.
  const std::vector<LatticeVec>& vertices() const { return vertices_; }
  double volume() const { return volume_; }
  const std::vector<double>& facet_euclidean_volumes() const { return facet_euclid_; }
  /// Euclidean (n-1)-volume of F_k divided by |v_k|.
  const std::vector<double>& facet_lattice_volumes() const { return facet_lattice_; }

  /// Integer points of the closed polytope, sorted lexicographically.
  std::vector<LatticeVec> lattice_points() const;

 private:
  Polytope() = default;

  Fan fan_;
  LatticeVec offsets_;
  std::vector<LatticeVec> vertices_;
  double volume_ = 0.0;
  std::vector<double> facet_euclid_;
  std::vector<double> facet_lattice_;
};

/// iota(u) = (<u, v_1>, ..., <u, v_d>)
LatticeVec iota(const Fan& fan, const LatticeVec& u);

/// Element of Z^d / iota(M), stored as the representative that vanishes on
/// the generators of the first maximal cone.
struct PicardClass {
  LatticeVec canonical;
  bool operator==(const PicardClass&) const = default;
};

PicardClass picard_reduce(const Fan& fan, const LatticeVec& a);
bool picard_equal(const Fan& fan, const LatticeVec& a, const LatticeVec& b);

/// The unique u in M with <u, v_j> = values_j for j in the given smooth cone.
LatticeVec solve_on_cone(const Fan& fan, int cone, const LatticeVec& values);

/// W(z) = sum_i e^{-lambda_i} z^{v_i}; throws ZeroCoordinate if some z_j == 0.
std::complex<double> superpotential(const Polytope& polytope, std::span<const std::complex<double>> z);
/// Same Laurent polynomial for arbitrary offsets; W needs no ampleness.
std::complex<double> superpotential(const Fan& fan, const LatticeVec& offsets, std::span<const std::complex<double>> z);

/// Exact determinant of a small integer matrix (fraction-free elimination).
std::int64_t int_determinant(std::vector<LatticeVec> rows);

std::string format_lattice(const LatticeVec& v);

}  // namespace syzlab::toric
