#include "syzlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "syzlab/errors.hpp"
#include "syzlab/parallel.hpp"

namespace syzlab::growth {

std::string to_string(TailStatus status) {
  switch (status) {
    case TailStatus::Converged: return "converged";
    case TailStatus::Diverging: return "diverging";
    case TailStatus::Oscillating: return "oscillating";
    case TailStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct LineFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double rms = 0.0;
  double scatter = 0.0;  // max |q - model|
};

LineFit fit_window(const std::vector<double>& t, const std::vector<double>& q, std::size_t first, std::size_t count,
                   double rate) {
  Mat design(static_cast<Eigen::Index>(count), 2);
  Vec rhs(static_cast<Eigen::Index>(count));
  double col_scale = 0.0;
  for (std::size_t m = 0; m < count; ++m) col_scale = std::max(col_scale, std::exp(rate * t[first + m]));
  for (std::size_t m = 0; m < count; ++m) {
    const auto r = static_cast<Eigen::Index>(m);
    design(r, 0) = 1.0;
    design(r, 1) = std::exp(rate * t[first + m]) / col_scale;
    rhs[r] = q[first + m];
  }
  const Vec coef = design.colPivHouseholderQr().solve(rhs);
  const Vec err = design * coef - rhs;
  LineFit fit;
  fit.c0 = coef[0];
  fit.c1 = coef[1] / col_scale;
  fit.rms = std::sqrt(err.squaredNorm() / static_cast<double>(count));
  fit.scatter = err.cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace

TailFit fit_tail(const std::function<double(double)>& sampler, const TailOptions& opt) {
  if (opt.samples < 3 || !(opt.step > 0.0)) throw Error(ErrorCode::InvalidInput, "tail window needs >= 3 samples");
  double T0 = opt.T0;
  for (;;) {
    TailFit out;
    out.T0 = T0;
    out.step = opt.step;
    out.samples = opt.samples;
    out.rate = opt.rate;
    const auto M = static_cast<std::size_t>(opt.samples);
    std::vector<double> t(M + 1), q(M + 1);
    bool finite = true;
    for (std::size_t m = 0; m <= M; ++m) {
      t[m] = -T0 - static_cast<double>(m) * opt.step;
      q[m] = sampler(t[m]);
      finite = finite && std::isfinite(q[m]);
    }
    if (!finite) {
      out.status = TailStatus::Diverging;
      out.limit = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    const LineFit main = fit_window(t, q, 0, M, opt.rate);
    const LineFit shifted = fit_window(t, q, 1, M, opt.rate);
    out.limit = main.c0;
    out.decay = main.c1;
    out.residual = main.rms;
    out.shifted_limit = shifted.c0;
    const double scale = std::max(1.0, std::abs(main.c0));
    if (main.rms <= opt.tol_fit * scale && std::abs(main.c0 - shifted.c0) <= opt.tol_lim * scale) {
      out.converged = true;
      out.status = TailStatus::Converged;
      return out;
    }

    double spread = 0.0;
    for (std::size_t m = 0; m <= M; ++m) spread = std::max(spread, std::abs(q[m] - q[0]));
    if (opt.noise_floor) {
      double floor = 0.0;
      for (std::size_t m = 0; m <= M; ++m) floor = std::max(floor, opt.noise_floor(t[m]));
      if (spread <= floor || (main.scatter <= floor && std::abs(main.c0 - shifted.c0) <= floor)) {
        out.status = TailStatus::Inconclusive;
        return out;
      }
    }

    std::vector<double> d(M);
    for (std::size_t m = 0; m < M; ++m) d[m] = q[m + 1] - q[m];
    bool monotone = true;
    int sign_changes = 0;
    for (std::size_t m = 1; m < M; ++m) {
      if (d[m] * d[0] <= 0.0) monotone = false;
      if (d[m] * d[m - 1] < 0.0) ++sign_changes;
    }
    const bool decaying = std::abs(d[M - 1]) < 0.5 * std::abs(d[0]);
    if (monotone && !decaying) {
      out.status = TailStatus::Diverging;
      return out;
    }
    if (decaying && T0 + 2.0 <= opt.max_T0) {
      T0 += 2.0;
      continue;
    }
    (void)sign_changes;  // alternating or trendless: both reported as oscillating
    out.status = TailStatus::Oscillating;
    return out;
  }
}

TailFit tail_limit(const std::function<double(double)>& sampler, double T0, double step, int samples, double tol_fit,
                   double tol_lim) {
  TailOptions opt;
  opt.T0 = T0;
  opt.step = step;
  opt.samples = samples;
  opt.tol_fit = tol_fit;
  opt.tol_lim = tol_lim;
  opt.max_T0 = std::max(T0, 12.0);
  TailFit fit = fit_tail(sampler, opt);
  if (fit.status == TailStatus::Diverging) throw Error(ErrorCode::Diverging, "tail samples grow without bound");
  if (fit.status != TailStatus::Converged)
    throw Error(ErrorCode::Oscillating, "tail fit residual stays above tolerance without a trend");
  return fit;
}

Vec cone_coords(const toric::Fan& fan, int cone, const Vec& t) {
  if (cone < 0 || cone >= fan.num_cones()) throw Error(ErrorCode::InvalidInput, "cone index out of range");
  const auto& gens = fan.max_cones[static_cast<std::size_t>(cone)];
  if (t.size() != static_cast<Eigen::Index>(gens.size())) throw Error(ErrorCode::InvalidInput, "one t per generator");
  Vec xi = Vec::Zero(fan.dim);
  for (std::size_t j = 0; j < gens.size(); ++j)
    xi += t[static_cast<Eigen::Index>(j)] * to_vec(fan.generators[static_cast<std::size_t>(gens[j])]);
  return xi;
}

bool GrowthReport::pass() const { return overall() == Verdict::Pass; }

bool GrowthReport::any_fail() const {
  return std::any_of(entries.begin(), entries.end(), [](const GrowthEntry& e) { return e.verdict == Verdict::Fail; });
}

Verdict GrowthReport::overall() const {
  if (any_fail()) return Verdict::Fail;
  for (const auto& e : entries)
    if (e.verdict != Verdict::Pass) return Verdict::Inconclusive;
  return Verdict::Pass;
}

namespace {

struct Task {
  int cone, condition, j, k, l, frozen;
};

/// Bit-reproducible uniform draw in [-1, 1].
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

class Checker {
 public:
  Checker(const toric::Fan& fan, const ScalarField& g, const LatticeVec& a, const GrowthOptions& opt)
      : fan_(fan), g_(g), a_(a), opt_(opt), box_(g.grid_box()) {
    std::mt19937_64 rng(opt.seed);
    for (int c = 0; c < fan.num_cones(); ++c) {
      Vec r(fan.dim);
      for (int j = 0; j < fan.dim; ++j) r[j] = symmetric_unit(rng);
      frozen_.push_back(r);
    }
  }

  GrowthEntry run(const Task& task) const {
    GrowthEntry e;
    e.cone = task.cone;
    e.condition = task.condition;
    e.j = task.j;
    e.k = task.k;
    e.l = task.l;
    e.frozen = task.frozen;
    const auto& gens = fan_.max_cones[static_cast<std::size_t>(task.cone)];
    const Vec base = task.frozen == 0 ? Vec::Zero(fan_.dim) : frozen_[static_cast<std::size_t>(task.cone)];
    const int lim = task.condition == 1 ? task.j : task.l;

    TailOptions topt;
    topt.step = opt_.step;
    topt.samples = opt_.samples;
    topt.tol_fit = opt_.tol_fit;
    topt.tol_lim = opt_.tol_lim;
    topt.rate = task.condition == 3 ? 1.0 : 2.0;
    auto window = clamp_window(task.cone, base, lim);
    if (!window) {
      e.verdict = Verdict::Inconclusive;
      e.note = "window outside grid box";
      return e;
    }
    topt.T0 = *window;
    topt.max_T0 = box_ ? *window : std::max(opt_.max_T0, *window);

    auto point = [&, base](double s) {
      Vec t = base;
      t[lim] = s;
      return cone_coords(fan_, task.cone, t);
    };
    const Vec vj = to_vec(fan_.generators[static_cast<std::size_t>(gens[static_cast<std::size_t>(task.j)])]);
    const Vec vk =
        task.k >= 0 ? to_vec(fan_.generators[static_cast<std::size_t>(gens[static_cast<std::size_t>(task.k)])]) : vj;
    const double noise = opt_.grid_noise;
    auto with_floor = [&](std::function<double(double)> weight) {
      TailOptions o = topt;
      if (box_) o.noise_floor = [noise, weight](double s) { return noise * weight(s); };
      return o;
    };

    if (task.condition == 1) {
      const double aj = static_cast<double>(a_[static_cast<std::size_t>(gens[static_cast<std::size_t>(task.j)])]);
      auto lhs = [&](double s) { return 2.0 * std::exp(-2.0 * s) * (g_.gradient(point(s)).dot(vj) + aj); };
      auto rhs = [&](double s) { return std::exp(-2.0 * s) * vj.dot(g_.hessian(point(s)) * vj); };
      const TailFit fl = fit_tail(lhs, with_floor([](double s) { return 2.0 * std::exp(-2.0 * s); }));
      const TailFit fr = fit_tail(rhs, with_floor([](double s) { return std::exp(-2.0 * s); }));
      e.limit_lhs = fl.limit;
      e.limit_rhs = fr.limit;
      e.first_order_limit = fl.limit / 2.0;
      e.residual = std::abs(fl.limit - fr.limit);
      e.verdict = combine(fl, fr);
      if (e.verdict == Verdict::Pass && !(e.residual <= opt_.tol_match * std::max(1.0, std::abs(fl.limit)))) {
        e.verdict = Verdict::Fail;
        e.note = "limits differ";
      }
      describe(e, fl, fr);
      return e;
    }

    if (task.condition == 2) {
      auto q = [&](double s) { return vj.dot(g_.hessian(point(s)) * vk); };
      const TailFit f = fit_tail(q, with_floor([](double) { return 1.0; }));
      e.limit_lhs = f.limit;
      e.residual = f.residual;
      e.verdict = combine(f, f);
      describe(e, f, f);
      return e;
    }

    const int other = task.l == task.j ? task.k : task.j;
    const double t_other = base[other];
    auto q = [&](double s) { return std::exp(-s - t_other) * vj.dot(g_.hessian(point(s)) * vk); };
    const TailFit f = fit_tail(q, with_floor([t_other](double s) { return std::exp(-s - t_other); }));
    e.limit_lhs = f.limit;
    e.residual = std::abs(f.limit);
    e.verdict = combine(f, f);
    if (e.verdict == Verdict::Pass && !(std::abs(f.limit) <= opt_.tol_zero)) {
      e.verdict = Verdict::Fail;
      e.note = "limit is not zero";
    }
    describe(e, f, f);
    return e;
  }

 private:
  static Verdict combine(const TailFit& a, const TailFit& b) {
    auto failed = [](const TailFit& f) {
      return f.status == TailStatus::Diverging || f.status == TailStatus::Oscillating;
    };
    if (failed(a) || failed(b)) return Verdict::Fail;
    if (a.status == TailStatus::Inconclusive || b.status == TailStatus::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
  }

  static void describe(GrowthEntry& e, const TailFit& a, const TailFit& b) {
    if (!e.note.empty()) return;
    if (a.status != TailStatus::Converged) e.note = to_string(a.status);
    else if (b.status != TailStatus::Converged) e.note = to_string(b.status);
  }

  /// Largest T0 (in quarter steps) whose window stays in the grid box.
  std::optional<double> clamp_window(int cone, const Vec& base, int lim) const {
    if (!box_) return opt_.T0;
    const double span = opt_.step * opt_.samples;
    auto inside = [&](double s) {
      Vec t = base;
      t[lim] = s;
      return cone_coords(fan_, cone, t).cwiseAbs().maxCoeff() <= *box_;
    };
    for (double T0 = opt_.T0; T0 >= opt_.min_grid_T0 - 1e-12; T0 -= 0.25)
      if (inside(-T0) && inside(-T0 - span)) return T0;
    return std::nullopt;
  }

  const toric::Fan& fan_;
  const ScalarField& g_;
  const LatticeVec& a_;
  const GrowthOptions& opt_;
  std::optional<double> box_;
  std::vector<Vec> frozen_;
};

}  // namespace

GrowthReport check_growth(const toric::Fan& fan, const ScalarField& g, const LatticeVec& a,
                          const GrowthOptions& options) {
  if (static_cast<int>(a.size()) != fan.num_rays()) throw Error(ErrorCode::InvalidInput, "a needs one entry per ray");
  if (g.dim() != fan.dim) throw Error(ErrorCode::InvalidInput, "potential and fan dimensions differ");
  const int n = fan.dim;
  std::vector<Task> tasks;
  for (int c = 0; c < fan.num_cones(); ++c) {
    for (int j = 0; j < n; ++j)
      for (int fr = 0; fr < 2; ++fr) tasks.push_back({c, 1, j, -1, -1, fr});
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int fr = 0; fr < 2; ++fr) tasks.push_back({c, 2, j, k, l, fr});
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l : {j, k})
          for (int fr = 0; fr < 2; ++fr) tasks.push_back({c, 3, j, k, l, fr});
  }
  Checker checker(fan, g, a, options);
  GrowthReport report;
  report.representative = a;
  report.entries.resize(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) { report.entries[i] = checker.run(tasks[i]); });
  return report;
}

GrowthReport check_growth(const syz::LagrangianSection& s, const LatticeVec& a, const GrowthOptions& options) {
  return check_growth(s.fan(), s.potential(), a, options);
}

std::optional<ClassInference> infer_class(const syz::LagrangianSection& s, const GrowthOptions& options) {
  const auto& fan = s.fan();
  const ScalarField& g = s.potential();
  const auto box = g.grid_box();
  ClassInference out;
  out.representative.resize(static_cast<std::size_t>(fan.num_rays()));
  for (int i = 0; i < fan.num_rays(); ++i) {
    const Vec v = to_vec(fan.generators[static_cast<std::size_t>(i)]);
    TailOptions topt;
    topt.T0 = options.T0;
    topt.step = options.step;
    topt.samples = options.samples;
    topt.tol_fit = options.tol_fit;
    topt.tol_lim = options.tol_lim;
    topt.max_T0 = options.max_T0;
    if (box) {
      const double reach = v.cwiseAbs().maxCoeff();
      const double T0 = std::min(options.T0, *box / reach - options.step * options.samples);
      if (T0 < options.min_grid_T0) return std::nullopt;
      topt.T0 = T0;
      topt.max_T0 = T0;
      const double noise = options.grid_noise;
      topt.noise_floor = [noise](double) { return noise; };
    }
    auto q = [&](double t) { return -g.gradient(t * v).dot(v); };
    const TailFit fit = fit_tail(q, topt);
    out.boundary_fits.push_back(fit);
    if (fit.status != TailStatus::Converged && fit.status != TailStatus::Inconclusive) return std::nullopt;
    const double rounded = std::round(fit.limit);
    if (std::abs(fit.limit - rounded) > options.rounding_tolerance) return std::nullopt;
    if (std::abs(rounded) > options.max_divisor) return std::nullopt;
    out.representative[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rounded);
  }
  out.report = check_growth(s, out.representative, options);
  if (out.report.any_fail()) return std::nullopt;
  out.picard = toric::picard_reduce(fan, out.representative);
  return out;
}

GrowthReport extendability_check(const ScalarField& f, const GrowthOptions& options) {
  toric::Fan chart;
  chart.dim = f.dim();
  std::vector<int> cone;
  for (int j = 0; j < chart.dim; ++j) {
    LatticeVec e(static_cast<std::size_t>(chart.dim), 0);
    e[static_cast<std::size_t>(j)] = 1;
    chart.generators.push_back(e);
    cone.push_back(j);
  }
  chart.max_cones.push_back(cone);
  return check_growth(chart, f, LatticeVec(static_cast<std::size_t>(chart.dim), 0), options);
}

GrowthReport extendability_check(const toric::Fan& fan, const ScalarField& f, const GrowthOptions& options) {
  return check_growth(fan, f, LatticeVec(static_cast<std::size_t>(fan.num_rays()), 0), options);
}

namespace {

struct Strata {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double cross = 0.0;  // sum over i != k of a_i * (stratum-1 ratio)
};

Strata limit_strata(const kaehler::ToricPotential& potential, const LatticeVec& a, int cone, int k,
                       const Vec& frozen) {
  const auto& poly = potential.polytope();
  const auto& fan = poly.fan();
  if (cone < 0 || cone >= fan.num_cones()) throw Error(ErrorCode::InvalidInput, "cone index out of range");
  const auto& gens = fan.max_cones[static_cast<std::size_t>(cone)];
  if (k < 0 || k >= fan.dim) throw Error(ErrorCode::InvalidInput, "generator position out of range");
  if (frozen.size() != fan.dim) throw Error(ErrorCode::InvalidInput, "frozen vector has wrong dimension");
  if (static_cast<int>(a.size()) != fan.num_rays()) throw Error(ErrorCode::InvalidInput, "a needs one entry per ray");
  const int ik = gens[static_cast<std::size_t>(k)];
  const auto& points = potential.points();
  const auto& c = potential.weights();

  // b_u = c_u exp(2 sum_{m != k} l_{i_m}(u) t_m), computed relative to its maximum.
  std::vector<double> expo(points.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < points.size(); ++p) {
    double e = 0.0;
    for (int m = 0; m < fan.dim; ++m)
      if (m != k)
        e += 2.0 * static_cast<double>(poly.facet_value(gens[static_cast<std::size_t>(m)], points[p])) * frozen[m];
    expo[p] = e;
    if (c[p] > 0.0) top = std::max(top, e);
  }
  std::vector<double> b(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) b[p] = c[p] * std::exp(expo[p] - top);

  Strata s;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto lk = poly.facet_value(ik, points[p]);
    if (lk == 0) s.s0 += b[p];
    if (lk == 1) s.s1 += b[p];
    if (lk == 2) s.s2 += b[p];
  }
  if (!(s.s0 > 0.0) || !(s.s1 > 0.0))
    throw Error(ErrorCode::EmptyStratum, "no weighted lattice point with l_k(u) in {0, 1}");
  for (int i = 0; i < fan.num_rays(); ++i) {
    if (i == ik || a[static_cast<std::size_t>(i)] == 0) continue;
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto li = poly.facet_value(i, points[p]);
      if (li < 1) continue;
      const auto lk = poly.facet_value(ik, points[p]);
      if (lk == 1) num += static_cast<double>(li) * b[p];
      if (lk == 0) den += static_cast<double>(li) * b[p];
    }
    if (!(den > 0.0)) throw Error(ErrorCode::EmptyStratum, "empty l_i >= 1 stratum on the facet l_k = 0");
    s.cross += static_cast<double>(a[static_cast<std::size_t>(i)]) * num / den;
  }
  return s;
}

double sum_of(const LatticeVec& a) {
  double total = 0.0;
  for (auto x : a) total += static_cast<double>(x);
  return total;
}

}  // namespace

double appendix_limit(const kaehler::ToricPotential& potential, const LatticeVec& a, int cone, int k,
                      const Vec& frozen) {
  const Strata s = limit_strata(potential, a, cone, k, frozen);
  const int ik = potential.polytope().fan().max_cones[static_cast<std::size_t>(cone)][static_cast<std::size_t>(k)];
  const double ak = static_cast<double>(a[static_cast<std::size_t>(ik)]);
  return sum_of(a) * s.s1 / s.s0 - s.cross - 2.0 * ak * s.s2 / s.s1;
}

double appendix_hessian_limit(const kaehler::ToricPotential& potential, const LatticeVec& a, int cone, int k,
                              const Vec& frozen) {
  const Strata s = limit_strata(potential, a, cone, k, frozen);
  const int ik = potential.polytope().fan().max_cones[static_cast<std::size_t>(cone)][static_cast<std::size_t>(k)];
  const double ak = static_cast<double>(a[static_cast<std::size_t>(ik)]);
  return 2.0 * sum_of(a) * s.s1 / s.s0 - 2.0 * s.cross - 4.0 * ak * s.s2 / s.s1;
}

}  // namespace syzlab::growth
