#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "syzlab/spline.hpp"
#include "syzlab/types.hpp"

namespace syzlab {

/// Value, gradient and Hessian of a scalar function at one point.
struct Jet {
  double value = 0.0;
  Vec grad;
  Mat hess;

  explicit Jet(int n = 0) : grad(Vec::Zero(n)), hess(Mat::Zero(n, n)) {}
};

/// One concrete representation of a real function on N_R.
class FieldForm {
 public:
  virtual ~FieldForm() = default;
  virtual int dim() const = 0;
  /// out += scale * jet(xi), filling derivatives up to `order`.
  virtual void accumulate(const Vec& xi, double scale, int order, Jet& out) const = 0;
  /// Half-width of the smallest sampled-grid box this form depends on.
  virtual std::optional<double> grid_box() const { return std::nullopt; }
};

/// Weighted log-sum-exp family
///   sum_m alpha_m * (1/2) log sum_u w_{m,u} e^{2<u, xi>}
/// over a fixed set of lattice points. Houses the toric potential and the
/// Guillemin potentials with their exact derivatives.
class LatticeSumForm final : public FieldForm {
 public:
  struct Term {
    double coefficient;
    std::vector<double> weights;  // one nonnegative weight per point
  };

  LatticeSumForm(std::vector<LatticeVec> points, std::vector<Term> terms, bool shifted = true);

  int dim() const override { return static_cast<int>(points_.rows()); }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  Mat points_;  // n x P
  std::vector<Term> terms_;
  std::vector<std::vector<double>> log_weights_;
  bool shifted_;
};

class GridForm final : public FieldForm {
 public:
  explicit GridForm(TensorSpline spline) : spline_(std::move(spline)) {}
  int dim() const override { return spline_.dim(); }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;
  std::optional<double> grid_box() const override { return spline_.half_width(); }
  const TensorSpline& spline() const { return spline_; }

 private:
  TensorSpline spline_;
};

/// sum_k c_k prod_j xi_j^{p_kj}
class PolynomialForm final : public FieldForm {
 public:
  struct Monomial {
    double coefficient;
    std::vector<int> powers;
  };
  PolynomialForm(int dim, std::vector<Monomial> monomials);
  int dim() const override { return dim_; }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;

 private:
  int dim_;
  std::vector<Monomial> monomials_;
};

/// c * exp(<r, xi>)
class ExponentialForm final : public FieldForm {
 public:
  ExponentialForm(double coefficient, Vec rate) : coefficient_(coefficient), rate_(std::move(rate)) {}
  int dim() const override { return static_cast<int>(rate_.size()); }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;

 private:
  double coefficient_;
  Vec rate_;
};

/// A * (1 - |xi - c|^2 / rho^2)^3 inside the ball, zero outside; C^2 with compact support.
class BumpForm final : public FieldForm {
 public:
  BumpForm(Vec center, double radius, double amplitude);
  int dim() const override { return static_cast<int>(center_.size()); }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;

 private:
  Vec center_;
  double radius_;
  double amplitude_;
};

/// sum_k c_k f_k + <u, xi> + alpha
class SumForm final : public FieldForm {
 public:
  using Part = std::pair<double, std::shared_ptr<const FieldForm>>;
  SumForm(int dim, std::vector<Part> parts, Vec linear, double constant);
  int dim() const override { return dim_; }
  void accumulate(const Vec& xi, double scale, int order, Jet& out) const override;
  std::optional<double> grid_box() const override;

  const std::vector<Part>& parts() const { return parts_; }
  const Vec& linear() const { return linear_; }
  double constant() const { return constant_; }

 private:
  int dim_;
  std::vector<Part> parts_;
  Vec linear_;
  double constant_;
};

/// Immutable, cheaply copyable handle to a scalar function on N_R with
/// value, gradient and Hessian.
class ScalarField {
 public:
  explicit ScalarField(std::shared_ptr<const FieldForm> form);

  static ScalarField zero(int dim);
  static ScalarField affine(Vec linear, double constant);
  static ScalarField grid(TensorSpline spline);
  static ScalarField polynomial(int dim, std::vector<PolynomialForm::Monomial> monomials);
  static ScalarField exponential(double coefficient, Vec rate);
  static ScalarField bump(Vec center, double radius, double amplitude);

  int dim() const { return form_->dim(); }
  double value(const Vec& xi) const;
  Vec gradient(const Vec& xi) const;
  Mat hessian(const Vec& xi) const;
  Jet jet(const Vec& xi, int order = 2) const;

  std::optional<double> grid_box() const { return form_->grid_box(); }
  bool has_grid() const { return grid_box().has_value(); }

  const FieldForm& form() const { return *form_; }
  const std::shared_ptr<const FieldForm>& form_ptr() const { return form_; }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& f);

 private:
  std::shared_ptr<const FieldForm> form_;
};

}  // namespace syzlab
