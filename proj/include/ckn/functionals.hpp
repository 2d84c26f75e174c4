#pragma once

// Both sides of the radial inequalities, deficit ratios, and the integration
// by parts identities as numerical residuals. Every n-dimensional integral is
// |S^{n-1}| times a 1-D integral in r.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ckn/error.hpp"
#include "ckn/profiles.hpp"
#include "ckn/quad.hpp"

namespace ckn {

inline double surface_area(int n) {
  require(n >= 1, ErrorKind::InvalidParameter, "surface_area needs n >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

inline QuadratureSpec functional_spec() {
  QuadratureSpec s;
  s.abs_tol = 1e-14;
  s.rel_tol = 1e-11;
  s.max_subdivisions = 4000;
  return s;
}

struct Component {
  std::string name;
  double value = 0.0;
  double error = 0.0;
};

struct DeficitReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  double ratio = 0.0;  // lhs / (constant rhs); >= 1 when the inequality holds
  std::vector<Component> components;
  bool converged = true;
};

struct IdentityResidual {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double scale = 1.0;
  bool converged = true;

  double relative() const { return residual / scale; }
};

inline IdentityResidual make_residual(std::string name, double lhs, double rhs) {
  IdentityResidual r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  r.scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return r;
}

// r -> u'' + (n-1) u'/r
inline RealFn laplacian_radial(const RadialProfile& u, int n) {
  require(n >= 1, ErrorKind::InvalidParameter, "laplacian needs n >= 1");
  const bool regular = u.small_r_exponent >= 1.0;
  return [du = u.du, d2u = u.d2u, n, regular](double r) {
    if (r == 0.0) {
      if (!regular) throw Error(ErrorKind::SingularAtOrigin, "laplacian at r = 0 of a profile with u' ~ r^s, s < 1");
      return n * d2u(0.0);
    }
    return d2u(r) + (n - 1) * du(r) / r;
  };
}

namespace detail {

// |S^{n-1}| * integral of f(r) over [0, inf), using the profile's breakpoints.
// `origin_power` is the leading power of f at r = 0.
template <class F>
Component sphere_integral(std::string name, int n, F&& f, const RadialProfile& u, double origin_power,
                          const QuadratureSpec& base) {
  QuadratureSpec spec = base;
  if (spec.split_points.empty()) spec.split_points = u.split_points;
  std::sort(spec.split_points.begin(), spec.split_points.end());
  spec.split_points.erase(std::unique(spec.split_points.begin(), spec.split_points.end()), spec.split_points.end());
  spec.small_r_exponent = origin_power;
  const double s = surface_area(n);
  // Tolerances refer to the 1-D integral.
  const QuadratureResult q = integrate_semi_infinite(f, spec);
  return {std::move(name), s * q.value, s * q.error_estimate};
}

// Leading power of u' at 0.
inline double du_power(const RadialProfile& u) { return u.small_r_exponent; }

}  // namespace detail

// Integral of |Delta u|^2 |x|^{-2 alpha}.
inline Component delta_energy(const RadialProfile& u, int n, double alpha, const QuadratureSpec& spec = functional_spec()) {
  auto lap = laplacian_radial(u, n);
  const double p = 2.0 * (detail::du_power(u) - 1.0) + n - 1 - 2.0 * alpha;
  return detail::sphere_integral(
      "int |Lap u|^2 |x|^-2alpha", n, [&](double r) { const double l = lap(r); return l * l * std::pow(r, n - 1 - 2.0 * alpha); },
      u, p, spec);
}

// Integral of |u'|^q |x|^{-w}.
inline Component gradient_power(const RadialProfile& u, int n, double q, double w, const QuadratureSpec& spec = functional_spec()) {
  const double p = q * detail::du_power(u) + n - 1 - w;
  return detail::sphere_integral(
      "int |grad u|^" + detail::fmt(q) + " |x|^-" + detail::fmt(w), n,
      [&](double r) {
        const double d = std::abs(u.du(r));
        if (d == 0.0) return 0.0;
        return std::pow(d, q) * std::pow(r, n - 1 - w);
      },
      u, p, spec);
}

// Integral of |u|^2 |x|^{m}.
inline Component mass_moment(const RadialProfile& u, int n, double m, const QuadratureSpec& spec = functional_spec()) {
  return detail::sphere_integral(
      "int u^2 |x|^" + detail::fmt(m), n,
      [&](double r) { const double v = u.u(r); return v == 0.0 ? 0.0 : v * v * std::pow(r, n - 1 + m); }, u,
      n - 1 + m, spec);
}

inline void require_basic(const InequalityParams& p) {
  const auto rep = validate_params(p);
  if (!rep.basic_ok()) throw Error(ErrorKind::InvalidParameter, "violated conditions: " + rep.failed_basic());
}

inline DeficitReport finish_report(DeficitReport r) {
  if (!(r.rhs > 0.0)) throw Error(ErrorKind::ZeroFunction, "right-hand side vanishes; profile is zero");
  r.ratio = r.lhs / (r.constant * r.rhs);
  return r;
}

// (int |Lap u|^2 |x|^-2a)(int |grad u|^{2(t-1)} |x|^-b) >= C (int |grad u|^t |x|^{-t g})^2
inline DeficitReport ckn_radial_report(const InequalityParams& p, const RadialProfile& u,
                                       const QuadratureSpec& spec = functional_spec()) {
  require_basic(p);
  DeficitReport r;
  const Component a = delta_energy(u, p.n, p.alpha, spec);
  const Component b = gradient_power(u, p.n, 2.0 * (p.t - 1.0), p.beta, spec);
  const Component c = gradient_power(u, p.n, p.t, p.t * p.gamma, spec);
  r.components = {a, b, c};
  r.lhs = a.value * b.value;
  r.rhs = c.value * c.value;
  r.constant = p.sharp_constant();
  return finish_report(r);
}

// (int |Lap u|^2 |x|^-2a)(int |x|^{2a} |grad u . x|^2) >= ((n+4a+2)/2)^2 (int |grad u|^2)^2
inline DeficitReport cknalpha_report(int n, double alpha, const RadialProfile& u,
                                     const QuadratureSpec& spec = functional_spec()) {
  require(n - 2.0 * alpha > 0 && n + 2.0 * alpha > 0 && n + 2.0 + 4.0 * alpha > 0, ErrorKind::InvalidParameter,
          "need n - 2alpha > 0, n + 2alpha > 0, n + 2 + 4alpha > 0");
  DeficitReport r;
  const Component a = delta_energy(u, n, alpha, spec);
  const Component b = gradient_power(u, n, 2.0, -(2.0 + 2.0 * alpha), spec);
  const Component c = gradient_power(u, n, 2.0, 0.0, spec);
  r.components = {a, b, c};
  r.lhs = a.value * b.value;
  r.rhs = c.value * c.value;
  const double k = (n + 4.0 * alpha + 2.0) / 2.0;
  r.constant = k * k;
  return finish_report(r);
}

// (int |grad u|^2)(int |x|^2 u^2) >= (n^2/4)(int u^2)^2
inline DeficitReport hpw_report(int n, const RadialProfile& u, const QuadratureSpec& spec = functional_spec()) {
  DeficitReport r;
  const Component a = gradient_power(u, n, 2.0, 0.0, spec);
  const Component b = mass_moment(u, n, 2.0, spec);
  const Component c = mass_moment(u, n, 0.0, spec);
  r.components = {a, b, c};
  r.lhs = a.value * b.value;
  r.rhs = c.value * c.value;
  r.constant = n * n / 4.0;
  return finish_report(r);
}

// int |Lap u + u' r^{1+2a}|^2 r^{-2a} = int |Lap u|^2 r^{-2a} + int u'^2 r^{2+2a} + (n-2) int |grad u|^2
inline IdentityResidual identity_eq1_residual(int n, double alpha, const RadialProfile& u,
                                              const QuadratureSpec& spec = functional_spec()) {
  auto lap = laplacian_radial(u, n);
  const double s = detail::du_power(u);
  const Component lhs = detail::sphere_integral(
      "lhs", n,
      [&](double r) {
        const double v = lap(r) + u.du(r) * std::pow(r, 1.0 + 2.0 * alpha);
        return v * v * std::pow(r, n - 1 - 2.0 * alpha);
      },
      u, 2.0 * (s - 1.0) + n - 1 - 2.0 * alpha, spec);
  const Component a = delta_energy(u, n, alpha, spec);
  const Component b = gradient_power(u, n, 2.0, -(2.0 + 2.0 * alpha), spec);
  const Component c = gradient_power(u, n, 2.0, 0.0, spec);
  return make_residual("eq1", lhs.value, a.value + b.value + (n - 2) * c.value);
}

// int |Lap u|^2 r^{-2a} + int u'^2 r^{2+2a}
//   = int |Lap v - v' r^{1+2a}|^2 r^{-2a} U0^2 + (n+4a+2) int |grad u|^2,  v = u / U0.
// The first integrand is evaluated as (Lap u + u' r^{1+2a} + (n+2a) r^{2a} u)^2,
// which equals it exactly and never forms v.
inline IdentityResidual identity_general_residual(int n, double alpha, const RadialProfile& u,
                                                  const QuadratureSpec& spec = functional_spec()) {
  require(1.0 + alpha > 0 && n + 2.0 * alpha > 0 && n + 2.0 + 4.0 * alpha > 0, ErrorKind::InvalidParameter,
          "need 1 + alpha > 0, n + 2alpha > 0, n + 2 + 4alpha > 0");
  auto lap = laplacian_radial(u, n);
  const double s = detail::du_power(u);
  try {
    const Component a = delta_energy(u, n, alpha, spec);
    const Component b = gradient_power(u, n, 2.0, -(2.0 + 2.0 * alpha), spec);
    const Component c = gradient_power(u, n, 2.0, 0.0, spec);
    const Component w = detail::sphere_integral(
        "v-term", n,
        [&](double r) {
          const double v = lap(r) + u.du(r) * std::pow(r, 1.0 + 2.0 * alpha) + (n + 2.0 * alpha) * std::pow(r, 2.0 * alpha) * u.u(r);
          return v * v * std::pow(r, n - 1 - 2.0 * alpha);
        },
        u, std::min(2.0 * (s - 1.0), 4.0 * alpha) + n - 1 - 2.0 * alpha, spec);
    return make_residual("general", a.value + b.value, w.value + (n + 4.0 * alpha + 2.0) * c.value);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DivergenceSuspected) throw Error(ErrorKind::DecayViolation, e.what());
    throw;
  }
}

namespace detail {

// (n+2) int |grad u|^2 + int [(v'' - r v')^2 + (n-1)(v'/r)^2] e^{-r^2},  v = u e^{r^2/2}
inline double crucial_rhs(int n, const RadialProfile& u, const QuadratureSpec& spec) {
  const Component g = gradient_power(u, n, 2.0, 0.0, spec);
  const Component h = sphere_integral(
      "hessian-term", n,
      [&](double r) {
        const double a = u.d2u(r) + r * u.du(r) + u.u(r);
        const double b = u.du(r) / r + u.u(r);
        return (a * a + (n - 1) * b * b) * std::pow(r, n - 1);
      },
      u, std::min(2.0 * (du_power(u) - 1.0), 0.0) + n - 1, spec);
  return (n + 2.0) * g.value + h.value;
}

}  // namespace detail

// int |Lap u|^2 + int |x|^2 |grad u|^2 = (n+2) int |grad u|^2 + int ||Hess v - x (x) grad v||^2 e^{-|x|^2}
inline IdentityResidual identity_crucial_residual(int n, const RadialProfile& u,
                                                  const QuadratureSpec& spec = functional_spec()) {
  try {
    const Component a = delta_energy(u, n, 0.0, spec);
    const Component b = gradient_power(u, n, 2.0, -2.0, spec);
    return make_residual("crucial", a.value + b.value, detail::crucial_rhs(n, u, spec));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DivergenceSuspected) throw Error(ErrorKind::DecayViolation, e.what());
    throw;
  }
}

// Same right side against the printed left side int |Lap u|^2 + int |x|^2 u^2.
inline IdentityResidual identity_crucial_literal_residual(int n, const RadialProfile& u,
                                                          const QuadratureSpec& spec = functional_spec()) {
  try {
    const Component a = delta_energy(u, n, 0.0, spec);
    const Component b = mass_moment(u, n, 2.0, spec);
    return make_residual("crucial-literal", a.value + b.value, detail::crucial_rhs(n, u, spec));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DivergenceSuspected) throw Error(ErrorKind::DecayViolation, e.what());
    throw;
  }
}

// int ||Hess u + grad u (x) x||^2 = int |Lap u|^2 - n int |grad u|^2 + int |x|^2 |grad u|^2
inline IdentityResidual identity_hessian1_residual(int n, const RadialProfile& u,
                                                   const QuadratureSpec& spec = functional_spec()) {
  const double s = detail::du_power(u);
  const Component lhs = detail::sphere_integral(
      "lhs", n,
      [&](double r) {
        const double a = u.d2u(r) + r * u.du(r);
        const double b = u.du(r) / r;
        return (a * a + (n - 1) * b * b) * std::pow(r, n - 1);
      },
      u, 2.0 * (s - 1.0) + n - 1, spec);
  const Component a = delta_energy(u, n, 0.0, spec);
  const Component g = gradient_power(u, n, 2.0, 0.0, spec);
  const Component x = gradient_power(u, n, 2.0, -2.0, spec);
  return make_residual("hessian1", lhs.value, a.value - n * g.value + x.value);
}

// int (u'' + (n-1)u'/r - (n+2a)u'/r)^2 r^{n-2a-1} = int (Lap u)^2 r^{n-2a-1}
inline IdentityResidual identity_radial_delta_residual(int n, double alpha, const RadialProfile& u,
                                                       const QuadratureSpec& spec = functional_spec()) {
  const double s = detail::du_power(u);
  const Component lhs = detail::sphere_integral(
      "lhs", n,
      [&](double r) {
        const double v = u.d2u(r) - (1.0 + 2.0 * alpha) * u.du(r) / r;
        return v * v * std::pow(r, n - 2.0 * alpha - 1);
      },
      u, 2.0 * (s - 1.0) + n - 1 - 2.0 * alpha, spec);
  const Component a = delta_energy(u, n, alpha, spec);
  return make_residual("radial-delta", lhs.value, a.value);
}

}  // namespace ckn
