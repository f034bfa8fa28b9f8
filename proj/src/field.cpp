#include "syzlab/field.hpp"

#include <cmath>
#include <limits>

#include "syzlab/errors.hpp"

namespace syzlab {

LatticeSumForm::LatticeSumForm(std::vector<LatticeVec> points, std::vector<Term> terms, bool shifted)
    : terms_(std::move(terms)), shifted_(shifted) {
  if (points.empty()) throw Error(ErrorCode::InvalidInput, "lattice sum needs at least one point");
  const auto n = static_cast<Eigen::Index>(points.front().size());
  points_.resize(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) points_.col(static_cast<Eigen::Index>(p)) = to_vec(points[p]);
  for (const auto& t : terms_) {
    if (t.weights.size() != points.size()) throw Error(ErrorCode::InvalidInput, "one weight per lattice point");
    std::vector<double> lw(t.weights.size());
    bool any = false;
    for (std::size_t p = 0; p < lw.size(); ++p) {
      if (t.weights[p] < 0.0) throw Error(ErrorCode::InvalidInput, "lattice sum weights must be nonnegative");
      lw[p] = t.weights[p] > 0.0 ? std::log(t.weights[p]) : -std::numeric_limits<double>::infinity();
      any = any || t.weights[p] > 0.0;
    }
    if (!any) throw Error(ErrorCode::InvalidInput, "lattice sum term with all weights zero");
    log_weights_.push_back(std::move(lw));
  }
}

void LatticeSumForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  const Eigen::Index np = points_.cols();
  const Vec exponents = 2.0 * (points_.transpose() * xi);
  std::vector<double> w(static_cast<std::size_t>(np));
  for (std::size_t m = 0; m < terms_.size(); ++m) {
    const double alpha = terms_[m].coefficient * scale;
    if (alpha == 0.0) continue;
    const auto& lw = log_weights_[m];
    double shift = 0.0;
    if (shifted_) {
      shift = -std::numeric_limits<double>::infinity();
      for (Eigen::Index p = 0; p < np; ++p)
        if (std::isfinite(lw[p])) shift = std::max(shift, exponents[p] + lw[p]);
    }
    double z = 0.0;
    for (Eigen::Index p = 0; p < np; ++p) {
      w[p] = std::isfinite(lw[p]) ? std::exp(exponents[p] + lw[p] - shift) : 0.0;
      z += w[p];
    }
    if (!std::isfinite(z) || z <= 0.0)
      throw Error(ErrorCode::NumericOverflow, "unshifted lattice sum left the floating-point range");
    out.value += alpha * 0.5 * (shift + std::log(z));
    if (order < 1) continue;
    Vec mean = Vec::Zero(points_.rows());
    for (Eigen::Index p = 0; p < np; ++p)
      if (w[p] != 0.0) mean += (w[p] / z) * points_.col(p);
    out.grad += alpha * mean;
    if (order < 2) continue;
    // Two-pass covariance keeps the e^{2t}-small tails accurate.
    Mat cov = Mat::Zero(points_.rows(), points_.rows());
    for (Eigen::Index p = 0; p < np; ++p) {
      if (w[p] == 0.0) continue;
      const Vec d = points_.col(p) - mean;
      cov.noalias() += (w[p] / z) * d * d.transpose();
    }
    out.hess += (2.0 * alpha) * cov;
  }
}

void GridForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  spline_.accumulate(xi, scale, order, out.value, out.grad, out.hess);
}

PolynomialForm::PolynomialForm(int dim, std::vector<Monomial> monomials) : dim_(dim), monomials_(std::move(monomials)) {
  for (const auto& m : monomials_) {
    if (static_cast<int>(m.powers.size()) != dim_) throw Error(ErrorCode::InvalidInput, "monomial has wrong arity");
    for (int p : m.powers)
      if (p < 0) throw Error(ErrorCode::InvalidInput, "monomial powers must be nonnegative");
  }
}

void PolynomialForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  auto power = [](double x, int p) { return p <= 0 ? 1.0 : std::pow(x, p); };
  for (const auto& m : monomials_) {
    const double c = m.coefficient * scale;
    double v = c;
    for (int j = 0; j < dim_; ++j) v *= power(xi[j], m.powers[j]);
    out.value += v;
    if (order < 1) continue;
    for (int j = 0; j < dim_; ++j) {
      if (m.powers[j] == 0) continue;
      double g = c * m.powers[j] * power(xi[j], m.powers[j] - 1);
      for (int k = 0; k < dim_; ++k)
        if (k != j) g *= power(xi[k], m.powers[k]);
      out.grad[j] += g;
    }
    if (order < 2) continue;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        double h = c;
        for (int e = 0; e < dim_; ++e) {
          int p = m.powers[e];
          double factor = 1.0;
          if (e == j) {
            factor *= p;
            --p;
          }
          if (e == k) {
            factor *= p;
            --p;
          }
          if (p < 0) {
            h = 0.0;
            break;
          }
          h *= factor * power(xi[e], p);
        }
        out.hess(j, k) += h;
      }
  }
}

void ExponentialForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  const double v = scale * coefficient_ * std::exp(rate_.dot(xi));
  out.value += v;
  if (order >= 1) out.grad += v * rate_;
  if (order >= 2) out.hess += v * rate_ * rate_.transpose();
}

BumpForm::BumpForm(Vec center, double radius, double amplitude)
    : center_(std::move(center)), radius_(radius), amplitude_(amplitude) {
  if (!(radius_ > 0.0)) throw Error(ErrorCode::InvalidInput, "bump radius must be positive");
}

void BumpForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  const Vec d = xi - center_;
  const double r2 = radius_ * radius_;
  const double s = d.squaredNorm() / r2;
  if (s >= 1.0) return;
  const double a = scale * amplitude_;
  const double t = 1.0 - s;
  out.value += a * t * t * t;
  if (order >= 1) out.grad += (-6.0 * a * t * t / r2) * d;
  if (order >= 2)
    out.hess += (24.0 * a * t / (r2 * r2)) * d * d.transpose() - (6.0 * a * t * t / r2) * Mat::Identity(d.size(), d.size());
}

SumForm::SumForm(int dim, std::vector<Part> parts, Vec linear, double constant)
    : dim_(dim), parts_(std::move(parts)), linear_(std::move(linear)), constant_(constant) {
  for (const auto& [c, f] : parts_)
    if (f->dim() != dim_) throw Error(ErrorCode::InvalidInput, "summands have different dimensions");
  if (linear_.size() != dim_) throw Error(ErrorCode::InvalidInput, "affine part has wrong dimension");
}

void SumForm::accumulate(const Vec& xi, double scale, int order, Jet& out) const {
  for (const auto& [c, f] : parts_) f->accumulate(xi, scale * c, order, out);
  out.value += scale * (linear_.dot(xi) + constant_);
  if (order >= 1) out.grad += scale * linear_;
}

std::optional<double> SumForm::grid_box() const {
  std::optional<double> box;
  for (const auto& [c, f] : parts_)
    if (auto b = f->grid_box()) box = box ? std::min(*box, *b) : *b;
  return box;
}

ScalarField::ScalarField(std::shared_ptr<const FieldForm> form) : form_(std::move(form)) {
  if (!form_) throw Error(ErrorCode::InvalidInput, "null field form");
}

ScalarField ScalarField::zero(int dim) { return affine(Vec::Zero(dim), 0.0); }

ScalarField ScalarField::affine(Vec linear, double constant) {
  const int n = static_cast<int>(linear.size());
  return ScalarField(std::make_shared<SumForm>(n, std::vector<SumForm::Part>{}, std::move(linear), constant));
}

ScalarField ScalarField::grid(TensorSpline spline) { return ScalarField(std::make_shared<GridForm>(std::move(spline))); }

ScalarField ScalarField::polynomial(int dim, std::vector<PolynomialForm::Monomial> monomials) {
  return ScalarField(std::make_shared<PolynomialForm>(dim, std::move(monomials)));
}

ScalarField ScalarField::exponential(double coefficient, Vec rate) {
  return ScalarField(std::make_shared<ExponentialForm>(coefficient, std::move(rate)));
}

ScalarField ScalarField::bump(Vec center, double radius, double amplitude) {
  return ScalarField(std::make_shared<BumpForm>(std::move(center), radius, amplitude));
}

double ScalarField::value(const Vec& xi) const { return jet(xi, 0).value; }
Vec ScalarField::gradient(const Vec& xi) const { return jet(xi, 1).grad; }
Mat ScalarField::hessian(const Vec& xi) const { return jet(xi, 2).hess; }

Jet ScalarField::jet(const Vec& xi, int order) const {
  if (xi.size() != dim()) throw Error(ErrorCode::InvalidInput, "evaluation point has wrong dimension");
  Jet out(dim());
  form_->accumulate(xi, 1.0, order, out);
  return out;
}

namespace {

void flatten_into(const ScalarField& f, double c, std::vector<SumForm::Part>& parts, Vec& linear, double& constant) {
  if (const auto* sum = dynamic_cast<const SumForm*>(f.form_ptr().get())) {
    for (const auto& [k, part] : sum->parts()) parts.emplace_back(c * k, part);
    linear += c * sum->linear();
    constant += c * sum->constant();
  } else {
    parts.emplace_back(c, f.form_ptr());
  }
}

ScalarField combine(const ScalarField& a, double ca, const ScalarField& b, double cb) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidInput, "cannot combine fields of different dimension");
  std::vector<SumForm::Part> parts;
  Vec linear = Vec::Zero(a.dim());
  double constant = 0.0;
  flatten_into(a, ca, parts, linear, constant);
  flatten_into(b, cb, parts, linear, constant);
  return ScalarField(std::make_shared<SumForm>(a.dim(), std::move(parts), std::move(linear), constant));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, 1.0); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, -1.0); }
ScalarField operator*(double c, const ScalarField& f) {
  std::vector<SumForm::Part> parts;
  Vec linear = Vec::Zero(f.dim());
  double constant = 0.0;
  flatten_into(f, c, parts, linear, constant);
  return ScalarField(std::make_shared<SumForm>(f.dim(), std::move(parts), std::move(linear), constant));
}

}  // namespace syzlab
