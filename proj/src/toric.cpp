#include "syzlab/toric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "syzlab/errors.hpp"

namespace syzlab::toric {

namespace {

std::int64_t gcd_of(const LatticeVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

Mat cone_matrix(const Fan& fan, int cone) {
  const int n = fan.dim;
  Mat m(n, n);
  for (int j = 0; j < n; ++j) {
    const auto& v = fan.generators[fan.max_cones[cone][j]];
    for (int r = 0; r < n; ++r) m(r, j) = static_cast<double>(v[r]);
  }
  return m;
}

bool direction_in_cone(const Fan& fan, int cone, const Vec& dir) {
  const Mat m = cone_matrix(fan, cone);
  const Vec coeff = m.partialPivLu().solve(dir);
  const double tol = 1e-12 * (1.0 + dir.norm());
  return (coeff.array() >= -tol).all();
}

bool covered(const Fan& fan, const Vec& dir) {
  for (int c = 0; c < fan.num_cones(); ++c)
    if (direction_in_cone(fan, c, dir)) return true;
  return false;
}

void check_structure(const Fan& fan) {
  if (fan.dim < 1) throw Error(ErrorCode::MalformedFan, "dimension must be positive");
  if (fan.generators.empty()) throw Error(ErrorCode::MalformedFan, "no generators");
  if (fan.max_cones.empty()) throw Error(ErrorCode::MalformedFan, "no maximal cones");
  for (const auto& v : fan.generators) {
    if (static_cast<int>(v.size()) != fan.dim)
      throw Error(ErrorCode::MalformedFan, "generator " + format_lattice(v) + " has wrong length");
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }))
      throw Error(ErrorCode::MalformedFan, "zero generator");
  }
  std::set<LatticeVec> seen(fan.generators.begin(), fan.generators.end());
  if (seen.size() != fan.generators.size()) throw Error(ErrorCode::MalformedFan, "duplicate generators");
  for (const auto& cone : fan.max_cones) {
    if (static_cast<int>(cone.size()) != fan.dim)
      throw Error(ErrorCode::MalformedFan, "maximal cone must have exactly n generators");
    std::set<int> idx;
    for (int i : cone) {
      if (i < 0 || i >= fan.num_rays()) throw Error(ErrorCode::MalformedFan, "cone index out of range");
      idx.insert(i);
    }
    if (static_cast<int>(idx.size()) != fan.dim) throw Error(ErrorCode::MalformedFan, "repeated index in cone");
  }
}

double distance_to_affine_hull(const Vec& p, const std::vector<Vec>& pts) {
  const Vec base = pts.front();
  if (pts.size() == 1) return (p - base).norm();
  Mat span(base.size(), static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i) span.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - base;
  const Vec d = p - base;
  const Vec proj = span * span.colPivHouseholderQr().solve(d);
  return (d - proj).norm();
}

// Volume of the face cut out by the facets in `tight`. For a simple polytope
// a face of codimension |tight| has its facets in bijection with the extra
// facet indices that keep the vertex set nonempty.
double face_volume(const Polytope& p, const std::vector<int>& tight, std::map<std::vector<int>, double>& memo) {
  if (auto it = memo.find(tight); it != memo.end()) return it->second;
  const Fan& fan = p.fan();
  const int k = fan.dim - static_cast<int>(tight.size());
  auto verts_of = [&](const std::vector<int>& s) {
    std::vector<Vec> out;
    for (int c = 0; c < fan.num_cones(); ++c) {
      const auto& cone = fan.max_cones[c];
      if (std::all_of(s.begin(), s.end(), [&](int i) { return std::find(cone.begin(), cone.end(), i) != cone.end(); }))
        out.push_back(to_vec(p.vertices()[c]));
    }
    return out;
  };
  double vol = 0.0;
  if (k == 0) {
    vol = 1.0;
  } else {
    const auto verts = verts_of(tight);
    Vec centroid = Vec::Zero(fan.dim);
    for (const auto& v : verts) centroid += v;
    centroid /= static_cast<double>(verts.size());
    double acc = 0.0;
    for (int j = 0; j < fan.num_rays(); ++j) {
      if (std::find(tight.begin(), tight.end(), j) != tight.end()) continue;
      auto sub = tight;
      sub.push_back(j);
      std::sort(sub.begin(), sub.end());
      const auto sub_verts = verts_of(sub);
      if (sub_verts.empty()) continue;
      acc += distance_to_affine_hull(centroid, sub_verts) * face_volume(p, sub, memo);
    }
    vol = acc / k;
  }
  memo.emplace(tight, vol);
  return vol;
}

}  // namespace

bool FanReport::all_primitive() const {
  return std::all_of(primitive.begin(), primitive.end(), [](bool b) { return b; });
}

bool FanReport::all_smooth() const {
  return std::all_of(cone_smooth.begin(), cone_smooth.end(), [](bool b) { return b; });
}

std::int64_t int_determinant(std::vector<LatticeVec> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::string format_lattice(const LatticeVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

FanReport validate_fan(const Fan& fan, std::uint64_t seed) {
  check_structure(fan);
  FanReport report;
  for (const auto& v : fan.generators) report.primitive.push_back(gcd_of(v) == 1);

  std::vector<bool> used(fan.generators.size(), false);
  for (const auto& cone : fan.max_cones) {
    std::vector<LatticeVec> rows;
    for (int i : cone) {
      rows.push_back(fan.generators[i]);
      used[i] = true;
    }
    const auto det = int_determinant(rows);
    report.cone_determinants.push_back(det);
    report.cone_smooth.push_back(det == 1 || det == -1);
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) report.unused_generators.push_back(static_cast<int>(i));

  // Cones with zero determinant cannot be tested for membership.
  if (!std::all_of(report.cone_determinants.begin(), report.cone_determinants.end(), [](auto d) { return d != 0; })) {
    report.complete = false;
    report.exact_completeness = true;
    return report;
  }

  const int n = fan.dim;
  if (n == 1) {
    report.exact_completeness = true;
    report.complete = covered(fan, Vec::Constant(1, 1.0)) && covered(fan, Vec::Constant(1, -1.0));
  } else if (n == 2) {
    // The rays cut the circle into arcs; each arc lies in a single cone or in
    // none, so testing one interior direction per arc is exact.
    report.exact_completeness = true;
    std::vector<double> angles;
    for (const auto& v : fan.generators) angles.push_back(std::atan2(static_cast<double>(v[1]), static_cast<double>(v[0])));
    std::sort(angles.begin(), angles.end());
    bool ok = true;
    for (std::size_t i = 0; i < angles.size() && ok; ++i) {
      const double lo = angles[i];
      const double hi = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2.0 * M_PI;
      const double mid = 0.5 * (lo + hi);
      Vec dir(2);
      dir << std::cos(mid), std::sin(mid);
      ok = covered(fan, dir);
    }
    report.complete = ok;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto samples = static_cast<long>(std::pow(10.0, n));
    bool ok = true;
    for (long s = 0; s < samples && ok; ++s) {
      Vec dir(n);
      for (int k = 0; k < n; ++k) dir[k] = normal(rng);
      ok = covered(fan, dir.normalized());
    }
    report.complete = ok;
  }
  return report;
}

LatticeVec solve_on_cone(const Fan& fan, int cone, const LatticeVec& values) {
  const int n = fan.dim;
  std::vector<LatticeVec> rows;
  for (int i : fan.max_cones[cone]) rows.push_back(fan.generators[i]);
  const auto det = int_determinant(rows);
  if (det != 1 && det != -1) throw Error(ErrorCode::MalformedFan, "cone is not unimodular");
  // Cramer's rule with integer determinants.
  LatticeVec u(n);
  for (int k = 0; k < n; ++k) {
    auto m = rows;
    for (int r = 0; r < n; ++r) m[r][k] = values[r];
    u[k] = int_determinant(m) / det;
  }
  return u;
}

Polytope Polytope::build(Fan fan, LatticeVec offsets) {
  const auto report = validate_fan(fan);
  if (!report.ok()) throw Error(ErrorCode::MalformedFan, "fan must be smooth, complete and primitive");
  if (static_cast<int>(offsets.size()) != fan.num_rays())
    throw Error(ErrorCode::InvalidInput, "offsets must have one entry per generator");

  Polytope p;
  p.fan_ = std::move(fan);
  p.offsets_ = std::move(offsets);
  const Fan& f = p.fan_;

  std::set<LatticeVec> distinct;
  for (int c = 0; c < f.num_cones(); ++c) {
    LatticeVec rhs;
    for (int i : f.max_cones[c]) rhs.push_back(-p.offsets_[i]);
    LatticeVec x = solve_on_cone(f, c, rhs);
    for (int j = 0; j < f.num_rays(); ++j) {
      const auto& cone = f.max_cones[c];
      if (std::find(cone.begin(), cone.end(), j) != cone.end()) continue;
      if (pairing(x, f.generators[j]) + p.offsets_[j] <= 0)
        throw Error(ErrorCode::NotAmple, "vertex " + format_lattice(x) + " of cone " + std::to_string(c) +
                                             " is not strictly inside facet " + std::to_string(j));
    }
    distinct.insert(x);
    p.vertices_.push_back(std::move(x));
  }
  if (static_cast<int>(distinct.size()) != f.num_cones()) throw Error(ErrorCode::NotAmple, "vertices coincide");

  std::map<std::vector<int>, double> memo;
  p.volume_ = face_volume(p, {}, memo);
  if (!(p.volume_ > 0.0)) throw Error(ErrorCode::NotAmple, "polytope has empty interior");
  for (int k = 0; k < f.num_rays(); ++k) {
    const double e = face_volume(p, {k}, memo);
    if (!(e > 0.0)) throw Error(ErrorCode::NotAmple, "facet " + std::to_string(k) + " degenerates");
    p.facet_euclid_.push_back(e);
    p.facet_lattice_.push_back(e / to_vec(f.generators[k]).norm());
  }
  return p;
}

double Polytope::facet_value(int i, const Vec& x) const {
  return pairing(x, fan_.generators[i]) + static_cast<double>(offsets_[i]);
}

std::int64_t Polytope::facet_value(int i, const LatticeVec& u) const {
  return pairing(u, fan_.generators[i]) + offsets_[i];
}

double Polytope::min_facet_value(const Vec& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_facets(); ++i) m = std::min(m, facet_value(i, x));
  return m;
}

std::vector<LatticeVec> Polytope::lattice_points() const {
  const int n = dim();
  LatticeVec lo(vertices_.front()), hi(vertices_.front());
  for (const auto& v : vertices_)
    for (int k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  std::vector<LatticeVec> out;
  LatticeVec u = lo;
  while (true) {
    bool inside = true;
    for (int i = 0; i < num_facets() && inside; ++i) inside = facet_value(i, u) >= 0;
    if (inside) out.push_back(u);
    int k = n - 1;
    while (k >= 0 && u[k] == hi[k]) {
      u[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++u[k];
  }
  return out;  // odometer order is lexicographic
}

LatticeVec iota(const Fan& fan, const LatticeVec& u) {
  LatticeVec out;
  out.reserve(fan.generators.size());
  for (const auto& v : fan.generators) out.push_back(pairing(u, v));
  return out;
}

PicardClass picard_reduce(const Fan& fan, const LatticeVec& a) {
  if (static_cast<int>(a.size()) != fan.num_rays())
    throw Error(ErrorCode::InvalidInput, "divisor must have one entry per generator");
  LatticeVec on_cone;
  for (int i : fan.max_cones.front()) on_cone.push_back(a[i]);
  const LatticeVec u = solve_on_cone(fan, 0, on_cone);
  const LatticeVec shift = iota(fan, u);
  PicardClass cls{a};
  for (std::size_t i = 0; i < a.size(); ++i) cls.canonical[i] -= shift[i];
  return cls;
}

bool picard_equal(const Fan& fan, const LatticeVec& a, const LatticeVec& b) {
  return picard_reduce(fan, a) == picard_reduce(fan, b);
}

std::complex<double> superpotential(const Fan& fan, const LatticeVec& offsets, std::span<const std::complex<double>> z) {
  if (static_cast<int>(z.size()) != fan.dim) throw Error(ErrorCode::InvalidInput, "z has wrong dimension");
  if (static_cast<int>(offsets.size()) != fan.num_rays()) throw Error(ErrorCode::InvalidInput, "one offset per ray");
  for (const auto& zj : z)
    if (zj == std::complex<double>(0.0, 0.0)) throw Error(ErrorCode::ZeroCoordinate, "superpotential needs z_j != 0");
  std::complex<double> w(0.0, 0.0);
  for (int i = 0; i < fan.num_rays(); ++i) {
    std::complex<double> mono(std::exp(-static_cast<double>(offsets[i])), 0.0);
    for (int j = 0; j < fan.dim; ++j) mono *= std::pow(z[j], static_cast<int>(fan.generators[i][j]));
    w += mono;
  }
  return w;
}

std::complex<double> superpotential(const Polytope& polytope, std::span<const std::complex<double>> z) {
  return superpotential(polytope.fan(), polytope.offsets(), z);
}

}  // namespace syzlab::toric
