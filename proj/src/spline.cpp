#include "syzlab/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "syzlab/errors.hpp"

namespace syzlab {

namespace {

// Maps N samples (stride `in_stride`) to N + 2 coefficients (stride
// `out_stride`) for one grid line.
void interpolate_line(const double* in, std::size_t in_stride, double* out, std::size_t out_stride, int n, double h,
                      TensorSpline::EndSlope end) {
  auto f = [&](int i) { return in[static_cast<std::size_t>(i) * in_stride]; };
  double d0 = 0.0, d1 = 0.0;
  if (end == TensorSpline::EndSlope::Estimated) {
    d0 = (-11.0 * f(0) + 18.0 * f(1) - 9.0 * f(2) + 2.0 * f(3)) / (6.0 * h);
    d1 = (11.0 * f(n - 1) - 18.0 * f(n - 2) + 9.0 * f(n - 3) - 2.0 * f(n - 4)) / (6.0 * h);
  }
  // Tridiagonal system for c_0..c_{n-1} after eliminating c_{-1} and c_n.
  std::vector<double> sub(n, 1.0), diag(n, 4.0), sup(n, 1.0), rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = 6.0 * f(i);
  sup[0] = 2.0;
  rhs[0] += 2.0 * h * d0;
  sub[n - 1] = 2.0;
  rhs[n - 1] -= 2.0 * h * d1;
  for (int i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> c(n);
  c[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) c[i] = (rhs[i] - sup[i] * c[i + 1]) / diag[i];
  auto put = [&](int idx, double v) { out[static_cast<std::size_t>(idx + 1) * out_stride] = v; };
  for (int i = 0; i < n; ++i) put(i, c[i]);
  put(-1, c[1] - 2.0 * h * d0);
  put(n, c[n - 2] + 2.0 * h * d1);
}

struct Basis {
  std::array<double, 4> w, dw, d2w;
};

Basis basis(double s) {
  const double s2 = s * s, s3 = s2 * s, t = 1.0 - s;
  Basis b;
  b.w = {t * t * t / 6.0, (3.0 * s3 - 6.0 * s2 + 4.0) / 6.0, (-3.0 * s3 + 3.0 * s2 + 3.0 * s + 1.0) / 6.0, s3 / 6.0};
  b.dw = {-0.5 * t * t, 1.5 * s2 - 2.0 * s, -1.5 * s2 + s + 0.5, 0.5 * s2};
  b.d2w = {t, 3.0 * s - 2.0, -3.0 * s + 1.0, s};
  return b;
}

}  // namespace

TensorSpline::TensorSpline(int dim, double half_width, int resolution, std::vector<double> samples, EndSlope end)
    : dim_(dim), half_width_(half_width), resolution_(resolution), samples_(std::move(samples)) {
  if (dim < 1) throw Error(ErrorCode::InvalidInput, "grid dimension must be positive");
  if (resolution < 4) throw Error(ErrorCode::InvalidInput, "grid needs at least 4 samples per axis");
  if (!(half_width > 0.0)) throw Error(ErrorCode::InvalidInput, "grid box must be positive");
  std::size_t expected = 1;
  for (int a = 0; a < dim; ++a) expected *= static_cast<std::size_t>(resolution);
  if (samples_.size() != expected)
    throw Error(ErrorCode::InvalidInput, "grid expects " + std::to_string(expected) + " samples, got " +
                                             std::to_string(samples_.size()));
  h_ = 2.0 * half_width / (resolution - 1);

  // Apply the 1D interpolation operator along each axis in turn.
  std::vector<int> shape(dim, resolution);
  std::vector<double> current = samples_;
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<int> next_shape = shape;
    next_shape[axis] = resolution + 2;
    std::size_t inner = 1;
    for (int a = axis + 1; a < dim; ++a) inner *= static_cast<std::size_t>(shape[a]);
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(shape[a]);
    const auto len_in = static_cast<std::size_t>(shape[axis]);
    const auto len_out = static_cast<std::size_t>(next_shape[axis]);
    std::vector<double> next(outer * len_out * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i)
        interpolate_line(current.data() + o * len_in * inner + i, inner, next.data() + o * len_out * inner + i, inner,
                         resolution, h_, end);
    current = std::move(next);
    shape = next_shape;
  }
  coeffs_ = std::move(current);
}

void TensorSpline::accumulate(const Vec& xi, double scale, int order, double& value, Vec& grad, Mat& hess) const {
  const int n = dim_;
  std::vector<int> cell(n);
  std::vector<Basis> bases(n);
  const double slack = 1e-12 * half_width_;
  for (int a = 0; a < n; ++a) {
    const double x = xi[a];
    if (!(x >= -half_width_ - slack && x <= half_width_ + slack))
      throw Error(ErrorCode::OutsideGrid, "query coordinate " + std::to_string(x) + " outside grid box");
    const double u = (std::clamp(x, -half_width_, half_width_) + half_width_) / h_;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, resolution_ - 2);
    cell[a] = i;
    bases[a] = basis(u - i);
  }
  const int stride_len = resolution_ + 2;
  const int combos = 1 << (2 * n);
  const double inv_h = 1.0 / h_, inv_h2 = inv_h * inv_h;
  for (int combo = 0; combo < combos; ++combo) {
    std::size_t idx = 0;
    std::array<int, 8> m{};
    for (int a = 0; a < n; ++a) {
      m[a] = (combo >> (2 * a)) & 3;
      idx = idx * static_cast<std::size_t>(stride_len) + static_cast<std::size_t>(cell[a] + m[a]);
    }
    const double c = coeffs_[idx] * scale;
    if (c == 0.0) continue;
    double w = 1.0;
    for (int a = 0; a < n; ++a) w *= bases[a].w[m[a]];
    value += c * w;
    if (order < 1) continue;
    for (int a = 0; a < n; ++a) {
      double g = bases[a].dw[m[a]] * inv_h;
      for (int b = 0; b < n; ++b)
        if (b != a) g *= bases[b].w[m[b]];
      grad[a] += c * g;
    }
    if (order < 2) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double hv = 1.0;
        for (int e = 0; e < n; ++e) {
          if (e == a && e == b) hv *= bases[e].d2w[m[e]] * inv_h2;
          else if (e == a || e == b) hv *= bases[e].dw[m[e]] * inv_h;
          else hv *= bases[e].w[m[e]];
        }
        hess(a, b) += c * hv;
        if (b != a) hess(b, a) += c * hv;
      }
  }
}

}  // namespace syzlab
