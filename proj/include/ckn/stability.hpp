#pragma once

// Deficit of the second-order uncertainty principle
//   (int |Lap u|^2)(int |x|^2 |grad u|^2) >= ((n+2)/2)^2 (int |grad u|^2)^2,
// projections onto E = {c e^{-a|x|^2}}, and the two stability estimates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "ckn/eigen.hpp"
#include "ckn/error.hpp"
#include "ckn/functionals.hpp"
#include "ckn/profiles.hpp"

namespace ckn {

inline QuadratureSpec stability_spec() {
  QuadratureSpec s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-10;
  s.max_subdivisions = 4000;
  return s;
}

struct DeficitValue {
  double delta = 0.0;
  double delta_literal = 0.0;  // same with (int |x|^2 u^2)^{1/2} in place of (int |x|^2 |grad u|^2)^{1/2}
  double lap_energy = 0.0;     // int |Lap u|^2
  double x_gradient = 0.0;     // int |x|^2 |grad u|^2
  double gradient = 0.0;       // int |grad u|^2
  double x_mass = 0.0;         // int |x|^2 u^2
};

inline DeficitValue delta_deficit(const RadialProfile& u, int n, const QuadratureSpec& spec = stability_spec()) {
  require(n >= 1, ErrorKind::InvalidParameter, "need n >= 1");
  DeficitValue d;
  d.gradient = gradient_power(u, n, 2.0, 0.0, spec).value;
  if (!(d.gradient > 0.0)) throw Error(ErrorKind::ZeroFunction, "int |grad u|^2 vanishes");
  d.lap_energy = delta_energy(u, n, 0.0, spec).value;
  d.x_gradient = gradient_power(u, n, 2.0, -2.0, spec).value;
  d.x_mass = mass_moment(u, n, 2.0, spec).value;
  const double k = 0.5 * (n + 2.0);
  d.delta = std::sqrt(d.lap_energy * d.x_gradient) / (k * d.gradient) - 1.0;
  d.delta_literal = std::sqrt(d.lap_energy * d.x_mass) / (k * d.gradient) - 1.0;
  return d;
}

enum class Metric { GradientL2, PlainL2 };

inline std::string_view to_string(Metric m) { return m == Metric::GradientL2 ? "gradient_L2" : "plain_L2"; }

struct ProjectionResult {
  GaussianCandidate candidate;
  double distance_sq = 0.0;
  double relative_distance = 0.0;  // distance_sq / ||u||^2 in the same metric
  bool constrained = false;
  Metric metric = Metric::GradientL2;
  bool at_boundary = false;  // optimum on the edge of log a in [-8, 8]
  double norm_sq = 0.0;      // ||u||^2 in the metric
};

namespace detail {

inline QuadratureSpec with_gaussian_splits(const RadialProfile& u, double a, const QuadratureSpec& base) {
  QuadratureSpec spec = base;
  std::vector<double> pts = u.split_points;
  const double s = 1.0 / std::sqrt(a);
  for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) pts.push_back(f * s);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }), pts.end());
  spec.split_points = pts;
  return spec;
}

// ||G_a||^2 for G_a = e^{-a r^2} in the metric.
inline double gaussian_norm_sq(int n, double a, Metric m) {
  const double base = std::pow(std::numbers::pi / (2.0 * a), 0.5 * n);
  return m == Metric::PlainL2 ? base : n * a * base;
}

// <u, G_a> in the metric.
inline double gaussian_inner(const RadialProfile& u, int n, double a, Metric m, const QuadratureSpec& base) {
  const QuadratureSpec spec = with_gaussian_splits(u, a, base);
  if (m == Metric::PlainL2) {
    return sphere_integral("<u,G>", n, [&](double r) { return u.u(r) * std::exp(-a * r * r) * std::pow(r, n - 1); }, u,
                           n - 1, spec)
        .value;
  }
  return sphere_integral(
             "<grad u,grad G>", n,
             [&](double r) { return u.du(r) * (-2.0 * a * r) * std::exp(-a * r * r) * std::pow(r, n - 1); }, u,
             u.small_r_exponent + n, spec)
      .value;
}

inline double metric_norm_sq(const RadialProfile& u, int n, Metric m, const QuadratureSpec& spec) {
  return m == Metric::PlainL2 ? mass_moment(u, n, 0.0, spec).value : gradient_power(u, n, 2.0, 0.0, spec).value;
}

}  // namespace detail

// ||u - c e^{-a r^2}||^2 in the metric, integrated directly.
inline double distance_sq_at(const RadialProfile& u, int n, Metric m, const GaussianCandidate& g,
                             const QuadratureSpec& base = stability_spec()) {
  const QuadratureSpec spec = detail::with_gaussian_splits(u, g.a, base);
  if (m == Metric::PlainL2) {
    return detail::sphere_integral(
               "dist", n, [&](double r) { const double d = u.u(r) - g.value(r); return d * d * std::pow(r, n - 1); }, u,
               n - 1, spec)
        .value;
  }
  return detail::sphere_integral(
             "dist", n, [&](double r) { const double d = u.du(r) - g.deriv(r); return d * d * std::pow(r, n - 1); }, u,
             2.0 * std::min(u.small_r_exponent, 1.0) + n - 1, spec)
      .value;
}

// Best c for a given a: least squares, or |c| fixed by ||c G_a|| = ||u|| with the better sign.
inline double best_c(double inner, double norm_u_sq, double norm_g_sq, bool constrained) {
  if (!constrained) return inner / norm_g_sq;
  const double c = std::sqrt(norm_u_sq / norm_g_sq);
  return inner >= 0.0 ? c : -c;
}

inline ProjectionResult project(const RadialProfile& u, int n, Metric metric, bool constrained,
                                const QuadratureSpec& spec = stability_spec()) {
  require(n >= 1, ErrorKind::InvalidParameter, "need n >= 1");
  ProjectionResult res;
  res.metric = metric;
  res.constrained = constrained;
  res.norm_sq = detail::metric_norm_sq(u, n, metric, spec);
  if (!(res.norm_sq > 0.0)) throw Error(ErrorKind::ZeroFunction, "profile has zero norm in the metric");
  // For fixed a both problems reduce to maximizing |cos| between u and G_a.
  auto neg_cos = [&](double log_a) {
    const double a = std::exp(log_a);
    const double ip = detail::gaussian_inner(u, n, a, metric, spec);
    return -std::abs(ip) / std::sqrt(res.norm_sq * detail::gaussian_norm_sq(n, a, metric));
  };
  const double lo = -8.0, hi = 8.0;
  const int coarse = 64;
  int best_i = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= coarse; ++i) {
    const double f = neg_cos(lo + (hi - lo) * i / coarse);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  const double step = (hi - lo) / coarse;
  const double blo = std::max(lo, lo + (best_i - 1) * step);
  const double bhi = std::min(hi, lo + (best_i + 1) * step);
  const Minimum1D m = minimize_1d(neg_cos, blo, bhi);
  const double log_a = m.x;
  res.at_boundary = (log_a - lo) < 1e-6 || (hi - log_a) < 1e-6;
  const double a = std::exp(log_a);
  const double ip = detail::gaussian_inner(u, n, a, metric, spec);
  res.candidate = {best_c(ip, res.norm_sq, detail::gaussian_norm_sq(n, a, metric), constrained), a};
  res.distance_sq = distance_sq_at(u, n, metric, res.candidate, spec);
  res.relative_distance = res.distance_sq / res.norm_sq;
  return res;
}

struct StabilityReport {
  double delta = 0.0;
  double delta_literal = 0.0;
  double relative_distance = 0.0;
  double unconstrained_relative_distance = 0.0;
  double theorem_coefficient = 0.0;
  bool satisfied = false;
  ProjectionResult projection;
  // Diagnostic of the uncertainty-principle step, under int |grad u|^2 = 1 and
  // int |Lap u|^2 = int |x|^2 |grad u|^2: 1 <= ((n+2)/C) delta + n m - (n^2/4) m^2, m = int u^2.
  double hpw_step_mass = 0.0;
  double hpw_step_rhs = 0.0;
  bool hpw_step_holds = true;
};

inline double stability_constant(int n) { return std::min(n / 4.0, 1.0); }

inline StabilityReport stability_report_gradient(const RadialProfile& u, int n, const QuadratureSpec& spec = stability_spec()) {
  StabilityReport rep;
  const DeficitValue d = delta_deficit(u, n, spec);
  rep.delta = d.delta;
  rep.delta_literal = d.delta_literal;
  rep.projection = project(u, n, Metric::GradientL2, true, spec);
  rep.relative_distance = rep.projection.relative_distance;
  rep.unconstrained_relative_distance = project(u, n, Metric::GradientL2, false, spec).relative_distance;
  rep.theorem_coefficient = stability_constant(n) / (16.0 * (n + 2.0) * (n + 2.0));
  rep.satisfied = rep.delta >= rep.theorem_coefficient * rep.relative_distance - 1e-10;
  return rep;
}

inline StabilityReport stability_report_l2(const RadialProfile& u, int n, const QuadratureSpec& spec = stability_spec()) {
  StabilityReport rep;
  const DeficitValue d = delta_deficit(u, n, spec);
  rep.delta = d.delta;
  rep.delta_literal = d.delta_literal;
  rep.projection = project(u, n, Metric::PlainL2, true, spec);
  rep.relative_distance = rep.projection.relative_distance;
  rep.unconstrained_relative_distance = project(u, n, Metric::PlainL2, false, spec).relative_distance;
  const double C = stability_constant(n);
  rep.theorem_coefficient = C / (16.0 * n * (n + 2.0));
  rep.satisfied = rep.delta >= rep.theorem_coefficient * rep.relative_distance - 1e-10;
  // lambda^4 = I_x / I_Lap keeps int |grad u|^2 and balances the other two.
  const double lambda2 = std::sqrt(d.x_gradient / d.lap_energy);
  rep.hpw_step_mass = rep.projection.norm_sq / (lambda2 * d.gradient);
  const double m = rep.hpw_step_mass;
  rep.hpw_step_rhs = (n + 2.0) / C * rep.delta + n * m - 0.25 * n * n * m * m;
  rep.hpw_step_holds = 1.0 <= rep.hpw_step_rhs + 1e-9;
  return rep;
}

}  // namespace ckn
