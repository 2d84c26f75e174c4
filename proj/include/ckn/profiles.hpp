#pragma once

// Radial test profiles u(r) with analytic first and second derivatives,
// the extremal families U0, U1, U2, and parameter validity checks for the
// weighted second-order inequalities.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ckn/error.hpp"
#include "ckn/hermite_poly.hpp"
#include "ckn/quad.hpp"

namespace ckn {

enum class DecayClass { GaussianLike, StretchedExp, Polynomial, Compact };

inline std::string_view to_string(DecayClass d) {
  switch (d) {
    case DecayClass::GaussianLike: return "gaussian_like";
    case DecayClass::StretchedExp: return "stretched_exp";
    case DecayClass::Polynomial: return "polynomial";
    case DecayClass::Compact: return "compact";
  }
  return "unknown";
}

using RealFn = std::function<double(double)>;

// Immutable radial function with exact derivatives. `small_r_exponent` is the
// leading power of u' at the origin (1 for smooth radial functions).
struct RadialProfile {
  std::string name;
  RealFn u;
  RealFn du;
  RealFn d2u;
  double small_r_exponent = 1.0;
  DecayClass decay = DecayClass::GaussianLike;
  std::vector<double> split_points;
};

struct GaussianCandidate {
  double c = 1.0;
  double a = 1.0;  // v(x) = c exp(-a |x|^2)

  double value(double r) const { return c * std::exp(-a * r * r); }
  double deriv(double r) const { return -2.0 * a * r * c * std::exp(-a * r * r); }
};

// ---------------------------------------------------------------------------
// Parameters (n, alpha, beta, gamma, t)

struct InequalityParams {
  int n = 3;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.5;
  double t = 2.0;

  // gamma fixed by the balance relation gamma = (1 + alpha)/t + beta/(2t).
  static InequalityParams balanced(int n, double alpha, double beta, double t) {
    return {n, alpha, beta, balanced_gamma(alpha, beta, t), t};
  }
  static double balanced_gamma(double alpha, double beta, double t) {
    return (1.0 + alpha) / t + beta / (2.0 * t);
  }

  // ((n + t(1 + 2 alpha - gamma)) / t)^2
  double sharp_constant() const {
    const double c = (n + t * (1.0 + 2.0 * alpha - gamma)) / t;
    return c * c;
  }
};

struct ConditionCheck {
  std::string name;
  double margin = 0.0;  // > 0 means satisfied (balance: minus the mismatch)
  bool passed = false;
  bool basic = false;  // required for the inequality itself, not only sharpness
};

struct ValidityReport {
  std::vector<ConditionCheck> checks;

  bool basic_ok() const {
    for (const auto& c : checks) {
      if (c.basic && !c.passed) return false;
    }
    return true;
  }
  bool sharpness_ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  const ConditionCheck* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  // Names of failed basic conditions, comma separated.
  std::string failed_basic() const {
    std::string s;
    for (const auto& c : checks) {
      if (c.basic && !c.passed) {
        if (!s.empty()) s += ", ";
        s += c.name;
      }
    }
    return s;
  }
};

inline ValidityReport validate_params(const InequalityParams& p) {
  ValidityReport r;
  auto add = [&](std::string name, double margin, bool basic) {
    r.checks.push_back({std::move(name), margin, margin > 0, basic});
  };
  const double n = p.n;
  add("n>=1", n - 0.5, true);
  add("t>=2", p.t - 2.0 + 1e-300, true);
  add("n-2alpha>0", n - 2.0 * p.alpha, true);
  add("n-beta>0", n - p.beta, true);
  add("n-t*gamma>0", n - p.t * p.gamma, true);
  const double mismatch = std::abs(p.gamma - InequalityParams::balanced_gamma(p.alpha, p.beta, p.t));
  r.checks.push_back({"balance", -mismatch, mismatch <= 1e-14, true});

  const double kappa1 = 1.0 + p.alpha - p.beta / 2.0;
  add("welldefine:kappa>0", (1.0 + 2.0 * p.alpha) * (p.t - 2.0) + kappa1, false);
  add("welldefine:t<3+alpha-beta/2", 3.0 + p.alpha - p.beta / 2.0 - p.t, false);
  add("n+2alpha>0", n + 2.0 * p.alpha, false);
  if (p.t > 2.0) {
    add("n-beta<2(t-1)/(t-2)(1+alpha-beta/2)", 2.0 * (p.t - 1.0) / (p.t - 2.0) * kappa1 - (n - p.beta), false);
  } else {
    // The bound is +inf at t = 2.
    r.checks.push_back({"n-beta<2(t-1)/(t-2)(1+alpha-beta/2)", std::numeric_limits<double>::infinity(),
                        kappa1 > 0, false});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Profile families

namespace detail {

inline double ipow(double r, int j) {
  double v = 1.0;
  for (int k = 0; k < j; ++k) v *= r;
  return v;
}

// u = p(r) exp(-a r^2) with p given by value/derivative callbacks.
template <class P, class DP, class D2P>
RadialProfile poly_times_gauss(std::string name, double a, P p, DP dp, D2P d2p, double small_r_exponent) {
  RadialProfile prof;
  prof.name = std::move(name);
  prof.u = [=](double r) { return p(r) * std::exp(-a * r * r); };
  prof.du = [=](double r) { return (dp(r) - 2.0 * a * r * p(r)) * std::exp(-a * r * r); };
  prof.d2u = [=](double r) {
    return (d2p(r) - 4.0 * a * r * dp(r) - 2.0 * a * p(r) + 4.0 * a * a * r * r * p(r)) * std::exp(-a * r * r);
  };
  prof.small_r_exponent = small_r_exponent;
  prof.decay = a > 0 ? DecayClass::GaussianLike : DecayClass::Polynomial;
  // Breakpoints on the Gaussian length scale.
  if (a > 0) {
    const double s = 1.0 / std::sqrt(a);
    prof.split_points = {0.5 * s, s, 2.0 * s, 4.0 * s};
  } else {
    prof.split_points = {1.0};
  }
  return prof;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

// (c0 + c1 r + ... + cm r^m) exp(-a r^2). a = 0 gives a plain polynomial.
inline RadialProfile make_polygauss(double a, std::vector<double> coeffs) {
  require(a >= 0 && std::isfinite(a), ErrorKind::InvalidParameter, "polygauss needs a >= 0");
  require(!coeffs.empty(), ErrorKind::InvalidParameter, "polygauss needs at least one coefficient");
  std::string name = "polygauss(" + detail::fmt(a) + ";";
  for (std::size_t j = 0; j < coeffs.size(); ++j) name += (j ? "," : "") + detail::fmt(coeffs[j]);
  name += ")";
  auto c = std::make_shared<const std::vector<double>>(std::move(coeffs));
  auto p = [c](double r) {
    double v = 0.0;
    for (std::size_t j = c->size(); j-- > 0;) v = v * r + (*c)[j];
    return v;
  };
  auto dp = [c](double r) {
    double v = 0.0;
    for (std::size_t j = c->size(); j-- > 1;) v = v * r + static_cast<double>(j) * (*c)[j];
    return v;
  };
  auto d2p = [c](double r) {
    double v = 0.0;
    for (std::size_t j = c->size(); j-- > 2;) v = v * r + static_cast<double>(j * (j - 1)) * (*c)[j];
    return v;
  };
  const double small = (c->size() > 1 && (*c)[1] != 0.0) ? 0.0 : 1.0;
  return detail::poly_times_gauss(std::move(name), a, p, dp, d2p, small);
}

inline RadialProfile make_gauss(double a) {
  require(a > 0 && std::isfinite(a), ErrorKind::InvalidParameter, "gauss needs a > 0");
  RadialProfile p = make_polygauss(a, {1.0});
  p.name = "gauss(" + detail::fmt(a) + ")";
  return p;
}

inline RadialProfile make_polynomial(std::vector<double> coeffs) { return make_polygauss(0.0, std::move(coeffs)); }

// (1 + eps He_i(r)) exp(-a r^2)
inline RadialProfile make_hermmod(double eps, int i, double a) {
  require(a > 0 && std::isfinite(a), ErrorKind::InvalidParameter, "hermmod needs a > 0");
  require(i >= 0 && i <= 40, ErrorKind::InvalidParameter, "hermmod degree must be in [0, 40]");
  require(std::isfinite(eps), ErrorKind::InvalidParameter, "hermmod eps must be finite");
  auto p = [=](double r) { return 1.0 + eps * hermite_eval(i, r); };
  auto dp = [=](double r) { return eps * hermite_deriv(i, r); };
  auto d2p = [=](double r) { return eps * hermite_deriv2(i, r); };
  // Odd degrees have a nonzero linear term, so u'(0) != 0.
  const double small = (eps != 0.0 && i % 2 == 1) ? 0.0 : 1.0;
  return detail::poly_times_gauss("hermmod(" + detail::fmt(eps) + "," + std::to_string(i) + "," + detail::fmt(a) + ")",
                                  a, p, dp, d2p, small);
}

// Smooth bump exp(-1/(1 - s^2)), s = (r - center)/width, zero for |s| >= 1.
// Either center == 0 or center >= width, so the radial function is smooth.
inline RadialProfile make_bump(double center, double width) {
  require(width > 0 && std::isfinite(width) && std::isfinite(center), ErrorKind::InvalidParameter,
          "bump needs a finite positive width");
  require(center == 0.0 || center >= width, ErrorKind::InvalidParameter,
          "bump support must not straddle the origin (center == 0 or center >= width)");
  RadialProfile prof;
  prof.name = "bump(" + detail::fmt(center) + "," + detail::fmt(width) + ")";
  auto phi = [=](double r, int order) {
    const double s = (r - center) / width;
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    const double e = std::exp(-1.0 / q);
    if (e == 0.0) return 0.0;
    switch (order) {
      case 0: return e;
      case 1: return e * (-2.0 * s / (q * q)) / width;
      default: return e * (6.0 * s * s * s * s - 2.0) / (q * q * q * q) / (width * width);
    }
  };
  prof.u = [=](double r) { return phi(r, 0); };
  prof.du = [=](double r) { return phi(r, 1); };
  prof.d2u = [=](double r) { return phi(r, 2); };
  prof.small_r_exponent = 1.0;
  prof.decay = DecayClass::Compact;
  const double lo = center - width;
  if (lo > 0) prof.split_points.push_back(lo);
  if (center > 0) prof.split_points.push_back(center);
  prof.split_points.push_back(center + width);
  return prof;
}

// U0(r) = exp(-r^(2(1+alpha)) / (2(1+alpha)))
inline RadialProfile make_u0(double alpha) {
  require(1.0 + alpha > 0 && std::isfinite(alpha), ErrorKind::InvalidParameter, "u0 needs 1 + alpha > 0");
  const double q = 2.0 * (1.0 + alpha);
  RadialProfile prof;
  prof.name = "u0(" + detail::fmt(alpha) + ")";
  prof.u = [=](double r) { return std::exp(-std::pow(r, q) / q); };
  prof.du = [=](double r) { return -std::pow(r, 1.0 + 2.0 * alpha) * std::exp(-std::pow(r, q) / q); };
  prof.d2u = [=](double r) {
    return (-(1.0 + 2.0 * alpha) * std::pow(r, 2.0 * alpha) + std::pow(r, 2.0 + 4.0 * alpha)) *
           std::exp(-std::pow(r, q) / q);
  };
  prof.small_r_exponent = 1.0 + 2.0 * alpha;
  prof.decay = alpha == 0.0 ? DecayClass::GaussianLike : DecayClass::StretchedExp;
  const double s = std::pow(q, 1.0 / q);
  prof.split_points = {0.5 * s, s, 2.0 * s, 4.0 * s};
  return prof;
}

namespace detail {

inline QuadratureSpec profile_value_spec(double small_r_exponent) {
  QuadratureSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-12;
  s.max_subdivisions = 4000;
  s.small_r_exponent = small_r_exponent;
  return s;
}

// u(r) = integral over [r, inf) of -u'(s) ds
inline RealFn value_from_derivative(RealFn du, double small_r_exponent, std::vector<double> splits) {
  return [du = std::move(du), small_r_exponent, splits = std::move(splits)](double r) {
    QuadratureSpec spec = profile_value_spec(small_r_exponent);
    for (double s : splits) {
      if (s > r) spec.split_points.push_back(s);
    }
    auto neg = [&](double s) { return -du(s); };
    return integrate_from(neg, r, spec).value;
  };
}

}  // namespace detail

// U1(r) = integral_r^inf s^(1+2alpha) exp(-s^k / k) ds, k = 1 + alpha - beta/2.
inline RadialProfile make_u1(double alpha, double beta) {
  const double kappa = 1.0 + alpha - beta / 2.0;
  require(kappa > 0 && std::isfinite(kappa), ErrorKind::InvalidParameter, "u1 needs 1 + alpha - beta/2 > 0");
  require(2.0 + 2.0 * alpha > 0, ErrorKind::InvalidParameter, "u1 needs 1 + alpha > 0 for a finite value at 0");
  RadialProfile prof;
  prof.name = "u1(" + detail::fmt(alpha) + "," + detail::fmt(beta) + ")";
  prof.du = [=](double r) { return -std::pow(r, 1.0 + 2.0 * alpha) * std::exp(-std::pow(r, kappa) / kappa); };
  prof.d2u = [=](double r) {
    return (-(1.0 + 2.0 * alpha) * std::pow(r, 2.0 * alpha) + std::pow(r, 2.0 * alpha + kappa)) *
           std::exp(-std::pow(r, kappa) / kappa);
  };
  const double s = std::pow(kappa, 1.0 / kappa);
  prof.split_points = {0.5 * s, s, 2.0 * s, 4.0 * s, 8.0 * s};
  prof.small_r_exponent = 1.0 + 2.0 * alpha;
  prof.decay = kappa == 2.0 ? DecayClass::GaussianLike : DecayClass::StretchedExp;
  prof.u = detail::value_from_derivative(prof.du, prof.small_r_exponent, prof.split_points);
  return prof;
}

// U2(r) = integral_r^inf s^(1+2alpha) (1 + (t-2) s^k / k)^(1/(2-t)) ds,
// k = (1+2alpha)(t-2) + 1 + alpha - beta/2.
inline RadialProfile make_u2(double t, double alpha, double beta) {
  require(t > 2 && std::isfinite(t), ErrorKind::InvalidParameter, "u2 needs t > 2");
  const double kappa1 = 1.0 + alpha - beta / 2.0;
  const double kappa = (1.0 + 2.0 * alpha) * (t - 2.0) + kappa1;
  require(kappa > 0, ErrorKind::InvalidParameter, "u2 needs (1+2alpha)(t-2) + 1 + alpha - beta/2 > 0");
  require(t < 3.0 + alpha - beta / 2.0, ErrorKind::InvalidParameter,
          "u2 needs t < 3 + alpha - beta/2 for a finite value");
  require(2.0 + 2.0 * alpha > 0, ErrorKind::InvalidParameter, "u2 needs 1 + alpha > 0");
  RadialProfile prof;
  prof.name = "u2(" + detail::fmt(t) + "," + detail::fmt(alpha) + "," + detail::fmt(beta) + ")";
  const double expo = 1.0 / (2.0 - t);
  prof.du = [=](double r) {
    const double b = 1.0 + (t - 2.0) * std::pow(r, kappa) / kappa;
    return -std::pow(r, 1.0 + 2.0 * alpha) * std::pow(b, expo);
  };
  prof.d2u = [=](double r) {
    const double b = 1.0 + (t - 2.0) * std::pow(r, kappa) / kappa;
    return -(1.0 + 2.0 * alpha) * std::pow(r, 2.0 * alpha) * std::pow(b, expo) +
           std::pow(r, 2.0 * alpha + kappa) * std::pow(b, (t - 1.0) / (2.0 - t));
  };
  const double s = std::pow(kappa / (t - 2.0), 1.0 / kappa);
  prof.split_points = {0.5 * s, s, 2.0 * s, 4.0 * s, 8.0 * s};
  prof.small_r_exponent = 1.0 + 2.0 * alpha;
  prof.decay = DecayClass::Polynomial;
  prof.u = detail::value_from_derivative(prof.du, prof.small_r_exponent, prof.split_points);
  return prof;
}

// c * u
inline RadialProfile scaled(const RadialProfile& p, double c) {
  RadialProfile q = p;
  q.name = detail::fmt(c) + "*" + p.name;
  q.u = [f = p.u, c](double r) { return c * f(r); };
  q.du = [f = p.du, c](double r) { return c * f(r); };
  q.d2u = [f = p.d2u, c](double r) { return c * f(r); };
  return q;
}

// u_lambda(r) = lambda^((n-2)/2) u(lambda r); preserves the Dirichlet energy.
inline RadialProfile dilated(const RadialProfile& p, double lambda, int n) {
  require(lambda > 0 && std::isfinite(lambda), ErrorKind::InvalidParameter, "dilation needs lambda > 0");
  RadialProfile q = p;
  q.name = "dilate(" + p.name + "," + detail::fmt(lambda) + ")";
  const double c0 = std::pow(lambda, 0.5 * (n - 2));
  const double c1 = c0 * lambda;
  const double c2 = c1 * lambda;
  q.u = [f = p.u, c0, lambda](double r) { return c0 * f(lambda * r); };
  q.du = [f = p.du, c1, lambda](double r) { return c1 * f(lambda * r); };
  q.d2u = [f = p.d2u, c2, lambda](double r) { return c2 * f(lambda * r); };
  for (double& s : q.split_points) s /= lambda;
  return q;
}

}  // namespace ckn
