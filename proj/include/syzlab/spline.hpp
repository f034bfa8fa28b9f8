#pragma once

#include <vector>

#include "syzlab/types.hpp"

namespace syzlab {

/// C^2 tensor-product cubic B-spline interpolant of samples on the uniform
/// grid {-T + i h}^n, h = 2T / (N - 1). Samples are row-major with axis 0
/// slowest. Queries outside [-T, T]^n throw OutsideGrid.
class TensorSpline {
 public:
  enum class EndSlope {
    Estimated,  // third-order one-sided differences of the samples
    Zero,       // clamped to zero normal derivative
  };

  TensorSpline(int dim, double half_width, int resolution, std::vector<double> samples,
               EndSlope end = EndSlope::Estimated);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int resolution() const { return resolution_; }
  double spacing() const { return h_; }
  const std::vector<double>& samples() const { return samples_; }

  /// Adds scale * (value, gradient, Hessian) at xi; order selects how much is filled.
  void accumulate(const Vec& xi, double scale, int order, double& value, Vec& grad, Mat& hess) const;

 private:
  int dim_;
  double half_width_;
  int resolution_;
  double h_;
  std::vector<double> samples_;
  std::vector<double> coeffs_;  // (N + 2)^n B-spline coefficients
};

}  // namespace syzlab
