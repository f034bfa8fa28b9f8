#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "syzlab/field.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/section.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::growth {

struct GrowthOptions {
  double T0 = 6.0;
  double step = 0.5;
  int samples = 8;
  double tol_fit = 1e-7;
  double tol_lim = 1e-6;
  double tol_match = 1e-5;
  double tol_zero = 1e-6;
  /// Upper bound for pushing T0 outward when increments still decay.
  double max_T0 = 12.0;
  /// Grid sections: noise floor relative to the weight in front of a quantity,
  /// and the smallest T0 a clamped window may use.
  double grid_noise = 1e-4;
  double min_grid_T0 = 1.0;
  std::uint64_t seed = 42;
  int threads = 1;
  /// Divisor coefficients with larger magnitude are rejected by infer_class.
  int max_divisor = 16;
  double rounding_tolerance = 0.1;
};

enum class TailStatus { Converged, Diverging, Oscillating, Inconclusive };

std::string to_string(TailStatus status);

struct TailFit {
  double limit = 0.0;     // c0
  double decay = 0.0;     // c1
  double residual = 0.0;  // RMS of the fit
  double shifted_limit = 0.0;
  double T0 = 0.0;
  double step = 0.0;
  int samples = 0;
  double rate = 2.0;
  bool converged = false;
  TailStatus status = TailStatus::Inconclusive;
};

struct TailOptions {
  double T0 = 6.0;
  double step = 0.5;
  int samples = 8;
  double rate = 2.0;  // model c0 + c1 e^{rate t}
  double tol_fit = 1e-7;
  double tol_lim = 1e-6;
  double max_T0 = 12.0;  // adaptive extension ceiling; <= T0 disables it
  /// Noise floor at parameter t; a non-converged fit whose scatter stays
  /// below it is Inconclusive rather than a failure.
  std::function<double(double)> noise_floor;
};

/// Fits c0 + c1 e^{rate t} to sampler(t) at t = -T0 - m step, m < samples.
/// Never throws for numerical reasons; the outcome is in `status`.
TailFit fit_tail(const std::function<double(double)>& sampler, const TailOptions& options);

/// fit_tail with the default rate; throws Diverging or Oscillating when the
/// fit does not converge.
TailFit tail_limit(const std::function<double(double)>& sampler, double T0 = 6.0, double step = 0.5, int samples = 8,
                   double tol_fit = 1e-7, double tol_lim = 1e-6);

/// xi(t) = sum_j t_j v_{i_j} for the generators of maximal cone `cone`.
Vec cone_coords(const toric::Fan& fan, int cone, const Vec& t);

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict verdict);

struct GrowthEntry {
  int cone = 0;
  int condition = 0;  // 1, 2 or 3
  int j = -1;         // generator positions inside the cone
  int k = -1;
  int l = -1;         // limiting coordinate for conditions 2 and 3
  int frozen = 0;     // 0: other coordinates at 0, 1: seeded random values
  double limit_lhs = 0.0;
  double limit_rhs = 0.0;
  /// Condition 1 only: limit of e^{-2t}(<dg, v> + a), half the shared limit.
  double first_order_limit = 0.0;
  double residual = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

struct GrowthReport {
  LatticeVec representative;
  std::vector<GrowthEntry> entries;

  bool pass() const;
  bool any_fail() const;
  Verdict overall() const;
};

GrowthReport check_growth(const toric::Fan& fan, const ScalarField& g, const LatticeVec& a,
                          const GrowthOptions& options = {});
GrowthReport check_growth(const syz::LagrangianSection& s, const LatticeVec& a, const GrowthOptions& options = {});

struct ClassInference {
  LatticeVec representative;
  toric::PicardClass picard;
  std::vector<TailFit> boundary_fits;  // one per ray
  GrowthReport report;
};

/// Reads a_i off the boundary limits -lim <dg(t v_i), v_i> and confirms the
/// rounded vector with check_growth. Returns nothing if either step fails.
std::optional<ClassInference> infer_class(const syz::LagrangianSection& s, const GrowthOptions& options = {});

/// Growth check with a = 0 on the single-cone fan spanned by e_1..e_n.
GrowthReport extendability_check(const ScalarField& f, const GrowthOptions& options = {});
/// Growth check with a = 0 in every maximal-cone chart of `fan`.
GrowthReport extendability_check(const toric::Fan& fan, const ScalarField& f, const GrowthOptions& options = {});

/// Closed-form limit of e^{-2t_k}(<dg_{h0}, v_k> + a_k) along cone generator
/// k with the other cone coordinates frozen at `frozen` (entry k ignored).
/// Throws EmptyStratum if a required b_u sum is empty.
double appendix_limit(const kaehler::ToricPotential& potential, const LatticeVec& a, int cone, int k,
                      const Vec& frozen);
/// Closed-form limit of e^{-2t_k} v_k^T Hess(g_{h0}) v_k; twice appendix_limit.
double appendix_hessian_limit(const kaehler::ToricPotential& potential, const LatticeVec& a, int cone, int k,
                              const Vec& frozen);

}  // namespace syzlab::growth
