#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace syzlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Integer vector in N, M or Z^d.
using LatticeVec = std::vector<std::int64_t>;

inline std::int64_t pairing(const LatticeVec& u, const LatticeVec& v) {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

inline double pairing(const Vec& x, const LatticeVec& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += x[static_cast<Eigen::Index>(k)] * static_cast<double>(v[k]);
  return s;
}

inline Vec to_vec(const LatticeVec& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = static_cast<double>(v[k]);
  return out;
}

}  // namespace syzlab
