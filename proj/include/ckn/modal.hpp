#pragma once

// Per-mode functionals A, B, C of g (with f = r^k g), their Rayleigh quotient
// AB/C^2, the closed-form lower bound, and trial-function upper bounds for
// the per-mode sharp constants and their minimum over k.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ckn/eigen.hpp"
#include "ckn/error.hpp"
#include "ckn/functionals.hpp"
#include "ckn/profiles.hpp"
#include "ckn/quad.hpp"

namespace ckn {

struct ModalProfile {
  std::string name;
  RealFn g;
  RealFn dg;
  RealFn d2g;
  double small_r_exponent = 1.0;  // leading power of g' at 0
  DecayClass decay = DecayClass::GaussianLike;
  std::vector<double> split_points;

  static ModalProfile from_radial(const RadialProfile& u) {
    return {u.name, u.u, u.du, u.d2u, u.small_r_exponent, u.decay, u.split_points};
  }
};

inline QuadratureSpec modal_spec() {
  QuadratureSpec s;
  s.abs_tol = 1e-14;
  s.rel_tol = 1e-12;
  s.max_subdivisions = 4000;
  return s;
}

namespace detail {

template <class F>
QuadratureResult line_integral(F&& f, const ModalProfile& g, double origin_power, const QuadratureSpec& base) {
  QuadratureSpec spec = base;
  if (spec.split_points.empty()) spec.split_points = g.split_points;
  std::sort(spec.split_points.begin(), spec.split_points.end());
  spec.split_points.erase(std::unique(spec.split_points.begin(), spec.split_points.end()), spec.split_points.end());
  spec.small_r_exponent = origin_power;
  return integrate_semi_infinite(f, spec);
}

// integral of g'^2 r^w
inline QuadratureResult dg_moment(const ModalProfile& g, double w, const QuadratureSpec& spec) {
  return line_integral([&](double r) { const double d = g.dg(r); return d == 0.0 ? 0.0 : d * d * std::pow(r, w); },
                       g, 2.0 * g.small_r_exponent + w, spec);
}

// integral of g^2 r^w
inline QuadratureResult g_moment(const ModalProfile& g, double w, const QuadratureSpec& spec) {
  return line_integral([&](double r) { const double v = g.g(r); return v == 0.0 ? 0.0 : v * v * std::pow(r, w); },
                       g, w, spec);
}

}  // namespace detail

// A = int g''^2 r^{N-2a-1} + (1+2a)(N-1) int g'^2 r^{N-2a-3},  N = n + 2k
inline double a_func(const ModalProfile& g, int n, double alpha, int k, const QuadratureSpec& spec = modal_spec()) {
  require(n >= 1 && k >= 0, ErrorKind::InvalidParameter, "need n >= 1, k >= 0");
  const double N = n + 2.0 * k;
  const double w = N - 2.0 * alpha - 1.0;
  const auto first = detail::line_integral(
      [&](double r) { const double d = g.d2g(r); return d == 0.0 ? 0.0 : d * d * std::pow(r, w); }, g,
      2.0 * (g.small_r_exponent - 1.0) + w, spec);
  const double coef = (1.0 + 2.0 * alpha) * (N - 1.0);
  const double second = coef == 0.0 ? 0.0 : coef * detail::dg_moment(g, w - 2.0, spec).value;
  return first.value + second;
}

// B = int g'^2 r^{N-b-1} + b k int g^2 r^{N-b-3}
inline double b_func(const ModalProfile& g, int n, double beta, int k, const QuadratureSpec& spec = modal_spec()) {
  require(n >= 1 && k >= 0, ErrorKind::InvalidParameter, "need n >= 1, k >= 0");
  const double w = n + 2.0 * k - beta - 1.0;
  const double first = detail::dg_moment(g, w, spec).value;
  const double coef = beta * k;
  return first + (coef == 0.0 ? 0.0 : coef * detail::g_moment(g, w - 2.0, spec).value);
}

// C = int g'^2 r^{N-2g-1} + 2 g k int g^2 r^{N-2g-3}
inline double c_func(const ModalProfile& g, int n, double gamma, int k, const QuadratureSpec& spec = modal_spec()) {
  require(n >= 1 && k >= 0, ErrorKind::InvalidParameter, "need n >= 1, k >= 0");
  const double w = n + 2.0 * k - 2.0 * gamma - 1.0;
  const double first = detail::dg_moment(g, w, spec).value;
  const double coef = 2.0 * gamma * k;
  return first + (coef == 0.0 ? 0.0 : coef * detail::g_moment(g, w - 2.0, spec).value);
}

inline double rayleigh(const ModalProfile& g, int n, double alpha, double beta, double gamma, int k,
                       const QuadratureSpec& spec = modal_spec()) {
  const double c = c_func(g, n, gamma, k, spec);
  if (!(std::abs(c) > 1e-300)) throw Error(ErrorKind::DegenerateDenominator, "C functional vanishes");
  const double a = a_func(g, n, alpha, k, spec);
  const double b = b_func(g, n, beta, k, spec);
  return a * b / (c * c);
}

struct ModeIdentityReport {
  IdentityResidual a;
  IdentityResidual b;
  IdentityResidual c;

  double worst_relative() const { return std::max({a.relative(), b.relative(), c.relative()}); }
};

// f = r^k g assembled on the n-dimensional side against A, B, C of g.
inline ModeIdentityReport mode_identity_residual(const ModalProfile& g, int n, double alpha, double beta, double gamma,
                                                 int k, const QuadratureSpec& spec = modal_spec()) {
  require(n >= 1 && k >= 0, ErrorKind::InvalidParameter, "need n >= 1, k >= 0");
  const double ck = static_cast<double>(k) * (n + k - 2);
  auto f0 = [&](double r) { return std::pow(r, k) * g.g(r); };
  auto f1 = [&](double r) { return k * std::pow(r, k - 1) * g.g(r) + std::pow(r, k) * g.dg(r); };
  auto f2 = [&](double r) {
    return k * (k - 1.0) * std::pow(r, k - 2) * g.g(r) + 2.0 * k * std::pow(r, k - 1) * g.dg(r) +
           std::pow(r, k) * g.d2g(r);
  };
  const double s = g.small_r_exponent;
  const auto lhs_a = detail::line_integral(
      [&](double r) {
        const double v = f2(r) + (n - 1) * f1(r) / r - ck * f0(r) / (r * r);
        return v * v * std::pow(r, n - 2.0 * alpha - 1.0);
      },
      g, 2.0 * (k + s - 1.0) + n - 2.0 * alpha - 1.0, spec);
  auto grad_side = [&](double w) {
    return detail::line_integral(
        [&](double r) {
          const double d = f1(r);
          const double v = f0(r);
          return (d * d + ck * v * v / (r * r)) * std::pow(r, w);
        },
        g, 2.0 * std::min<double>(k + s, std::max(k - 1, 0)) + w, spec);
  };
  ModeIdentityReport rep;
  rep.a = make_residual("mode-A", lhs_a.value, a_func(g, n, alpha, k, spec));
  rep.b = make_residual("mode-B", grad_side(n - beta - 1.0).value, b_func(g, n, beta, k, spec));
  rep.c = make_residual("mode-C", grad_side(n - 2.0 * gamma - 1.0).value, c_func(g, n, gamma, k, spec));
  return rep;
}

enum class BoundForm {
  Squared,  // num / den^2 * Q; follows from C^2 <= den^2 (int g'^2 r^{N-2g-1})^2
  Printed,  // num / den * Q
};

// num = 1 + min{0, 4bk/(N-b-2)^2}, den = 1 + max{0, 8gk/(N-2g-2)^2},
// Q = ((N+4a-2g+2)/2)^2. A correction whose numerator bk (or gk) is zero is taken as 0.
inline double lower_bound(int n, double alpha, double beta, double gamma, int k, BoundForm form = BoundForm::Squared) {
  require(n >= 1 && k >= 0, ErrorKind::InvalidParameter, "need n >= 1, k >= 0");
  const double N = n + 2.0 * k;
  double num = 1.0;
  if (beta * k != 0.0) {
    const double d = N - beta - 2.0;
    require(d != 0.0, ErrorKind::InvalidParameter, "n + 2k - beta - 2 vanishes");
    num += std::min(0.0, 4.0 * beta * k / (d * d));
  }
  double den = 1.0;
  if (gamma * k != 0.0) {
    const double d = N - 2.0 * gamma - 2.0;
    require(d != 0.0, ErrorKind::InvalidParameter, "n + 2k - 2gamma - 2 vanishes");
    den += std::max(0.0, 8.0 * gamma * k / (d * d));
  }
  require(num > 0.0, ErrorKind::InvalidParameter, "numerator factor of the lower bound is not positive");
  const double q = (N + 4.0 * alpha - 2.0 * gamma + 2.0) / 2.0;
  return num / (form == BoundForm::Squared ? den * den : den) * q * q;
}

// ---------------------------------------------------------------------------
// Trial families

// g' = -r^{1+2a} exp(-r^s/s),  g = s^{p-1} Gamma(p, r^s/s),  p = (2+2a)/s
inline ModalProfile make_modal_u1_type(double alpha, double s) {
  require(s > 0 && 1.0 + alpha > 0, ErrorKind::InvalidParameter, "need s > 0 and 1 + alpha > 0");
  const double p = (2.0 + 2.0 * alpha) / s;
  const double pref = std::pow(s, p - 1.0);
  ModalProfile m;
  m.name = "u1type(" + detail::fmt(alpha) + "," + detail::fmt(s) + ")";
  m.g = [=](double r) { return pref * boost::math::tgamma(p, std::pow(r, s) / s); };
  m.dg = [=](double r) { return -std::pow(r, 1.0 + 2.0 * alpha) * std::exp(-std::pow(r, s) / s); };
  m.d2g = [=](double r) {
    return (-(1.0 + 2.0 * alpha) * std::pow(r, 2.0 * alpha) + std::pow(r, 2.0 * alpha + s)) * std::exp(-std::pow(r, s) / s);
  };
  m.small_r_exponent = 1.0 + 2.0 * alpha;
  m.decay = DecayClass::StretchedExp;
  const double sc = std::pow(s, 1.0 / s);
  m.split_points = {0.5 * sc, sc, 2.0 * sc, 4.0 * sc, 8.0 * sc};
  return m;
}

// g = (1 + sum_j c_j r^{2j}/j!) exp(-r^s/s), s > 1
inline ModalProfile make_modal_poly_envelope(double s, std::vector<double> c) {
  require(s > 1.0, ErrorKind::InvalidParameter, "envelope exponent must exceed 1");
  ModalProfile m;
  m.name = "polyenv(" + detail::fmt(s) + ";" + std::to_string(c.size()) + ")";
  // Coefficients of P in powers of r^2 (index j <-> r^{2j}).
  std::vector<double> q(c.size() + 1);
  q[0] = 1.0;
  double fact = 1.0;
  for (std::size_t j = 1; j <= c.size(); ++j) {
    fact *= static_cast<double>(j);
    q[j] = c[j - 1] / fact;
  }
  // P, P' and P'' by Horner in x = r^2.
  auto eval = [q](double r, int order) {
    const double x = r * r;
    double acc = 0.0;
    for (std::size_t j = q.size(); j-- > (order == 0 ? 0u : 1u);) {
      const double jj = static_cast<double>(j);
      const double w = order == 0 ? 1.0 : order == 1 ? 2.0 * jj : 2.0 * jj * (2.0 * jj - 1.0);
      acc = acc * x + w * q[j];
    }
    return order == 1 ? acc * r : acc;
  };
  m.g = [=](double r) { return eval(r, 0) * std::exp(-std::pow(r, s) / s); };
  m.dg = [=](double r) {
    const double e = std::exp(-std::pow(r, s) / s);
    return (eval(r, 1) - std::pow(r, s - 1.0) * eval(r, 0)) * e;
  };
  m.d2g = [=](double r) {
    const double e = std::exp(-std::pow(r, s) / s);
    const double p = eval(r, 0), dp = eval(r, 1), d2p = eval(r, 2);
    const double h = std::pow(r, s - 1.0);
    const double dh = (s - 1.0) * std::pow(r, s - 2.0);
    return (d2p - 2.0 * h * dp - dh * p + h * h * p) * e;
  };
  m.small_r_exponent = std::min(1.0, s - 1.0);
  m.decay = s == 2.0 ? DecayClass::GaussianLike : DecayClass::StretchedExp;
  const double sc = std::pow(s, 1.0 / s);
  m.split_points = {0.5 * sc, sc, 2.0 * sc, 4.0 * sc, 8.0 * sc, 16.0 * sc};
  return m;
}

struct SharpKEstimate {
  double upper = std::numeric_limits<double>::infinity();
  ModalProfile witness;
  std::string family;
  long evaluations = 0;
  bool budget_exhausted = false;
};

namespace detail {

inline QuadratureSpec modal_search_spec() {
  QuadratureSpec s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-9;
  s.max_subdivisions = 1000;
  return s;
}

inline double safe_rayleigh(const ModalProfile& g, int n, double alpha, double beta, double gamma, int k,
                            const QuadratureSpec& spec) {
  try {
    const double v = rayleigh(g, n, alpha, beta, gamma, k, spec);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline double envelope_exponent(double theta) { return 1.0 + 5.0 / (1.0 + std::exp(-theta)); }
inline double envelope_theta(double s) {
  const double y = std::clamp((s - 1.0) / 5.0, 1e-6, 1.0 - 1e-6);
  return std::log(y / (1.0 - y));
}

}  // namespace detail

inline constexpr int kEnvelopeCoefficients = 11;

// Upper bound on the per-mode sharp constant from explicit trial functions.
// `budget` bounds the number of Rayleigh evaluations.
inline SharpKEstimate estimate_sharp_k(int n, double alpha, double beta, double gamma, int k, long budget = 1500) {
  require(n >= 1 && k >= 0 && budget >= 1, ErrorKind::InvalidParameter, "need n >= 1, k >= 0, budget >= 1");
  SharpKEstimate best;
  const QuadratureSpec loose = detail::modal_search_spec();
  const QuadratureSpec tight = modal_spec();
  auto consider = [&](ModalProfile g, std::string family) {
    const double v = detail::safe_rayleigh(g, n, alpha, beta, gamma, k, tight);
    if (v < best.upper) {
      best.upper = v;
      best.witness = std::move(g);
      best.family = std::move(family);
    }
  };

  // (i) the radial extremal family in dimension n + 2k, exponent free.
  const double kappa = 1.0 + alpha - beta / 2.0;
  const double s0 = kappa > 0.05 ? kappa : 1.0;
  double s_best = s0;
  if (1.0 + alpha > 0) {
    auto obj = [&](double log_s) {
      ++best.evaluations;
      return detail::safe_rayleigh(make_modal_u1_type(alpha, std::exp(log_s)), n, alpha, beta, gamma, k, loose);
    };
    double f_best = obj(std::log(s0));
    if (budget >= 80) {
      const double lo = std::log(0.05), hi = std::log(12.0);
      const Minimum1D m = minimize_1d(obj, lo, hi);
      best.evaluations += m.evaluations;
      if (m.f < f_best) {
        f_best = m.f;
        s_best = std::exp(m.x);
      }
    }
    consider(make_modal_u1_type(alpha, s_best), "u1type");
    if (s_best != s0) consider(make_modal_u1_type(alpha, s0), "u1type");
  }

  // (ii) even polynomial times stretched exponential, Nelder-Mead.
  const long remaining = budget - best.evaluations;
  if (remaining > 2 * (kEnvelopeCoefficients + 2)) {
    auto obj = [&](std::span<const double> x) {
      const double s = detail::envelope_exponent(x[0]);
      return detail::safe_rayleigh(make_modal_poly_envelope(s, std::vector<double>(x.begin() + 1, x.end())), n, alpha,
                                   beta, gamma, k, loose);
    };
    std::vector<std::vector<double>> seeds;
    std::vector<double> seed(kEnvelopeCoefficients + 1, 0.0);
    seed[0] = detail::envelope_theta(std::clamp(s_best, 1.05, 5.95));
    seeds.push_back(seed);
    seed[0] = detail::envelope_theta(2.0);
    seeds.push_back(seed);
    MultistartOptions opt;
    opt.budget = remaining;
    opt.initial_step = 0.5;
    const MinimumND m = minimize_multistart(obj, seeds, opt);
    best.evaluations += m.evaluations;
    best.budget_exhausted = m.budget_exhausted;
    if (std::isfinite(m.f)) {
      consider(make_modal_poly_envelope(detail::envelope_exponent(m.x[0]), std::vector<double>(m.x.begin() + 1, m.x.end())),
               "polyenv");
    }
  }
  return best;
}

struct ModeBound {
  int k = 0;
  double lower = 0.0;
  double lower_printed = 0.0;
  double upper = 0.0;
  std::string family;
};

struct SharpConstantBracket {
  int k_star = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<ModeBound> per_k;
  int truncation_k = 0;
  double tail_bound = 0.0;  // lower bound valid for every k > truncation_k
  bool budget_exhausted = false;
};

// Lower bound for every k >= K, valid once the correction factors are
// monotone (K > m/2, m'/2) and the leading quadratic is increasing.
inline double tail_lower_bound(int n, double alpha, double beta, double gamma, int K) {
  const double m = n - beta - 2.0;
  const double mp = n - 2.0 * gamma - 2.0;
  auto h = [](double k, double mm) { return k / ((2.0 * k + mm) * (2.0 * k + mm)); };
  const double num = 1.0 - 4.0 * std::max(0.0, -beta) * h(K, m);
  const double den = 1.0 + 8.0 * std::max(0.0, gamma) * h(K, mp);
  if (num <= 0.0) return 0.0;
  const double q = (n + 2.0 * K + 4.0 * alpha - 2.0 * gamma + 2.0) / 2.0;
  return num / (den * den) * q * q;
}

inline SharpConstantBracket min_over_k(int n, double alpha, double beta, double gamma, long budget_per_k = 1500,
                                       int k_max = 200) {
  const InequalityParams p{n, alpha, beta, gamma, 2.0};
  require_basic(p);
  const double m = n - beta - 2.0;
  const double mp = n - 2.0 * gamma - 2.0;
  // First K where h is decreasing in both corrections and the quadratic base is positive and increasing.
  int K0 = std::max({0, static_cast<int>(std::ceil(m / 2.0)), static_cast<int>(std::ceil(mp / 2.0))});
  while (n + 2.0 * K0 + 4.0 * alpha - 2.0 * gamma + 2.0 <= 0.0) ++K0;

  SharpConstantBracket br;
  br.upper = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    if (k >= K0 && std::isfinite(br.upper)) {
      const double tail = tail_lower_bound(n, alpha, beta, gamma, k);
      if (tail > (1.0 + 1e-6) * br.upper) {
        br.truncation_k = k - 1;
        br.tail_bound = tail;
        break;
      }
    }
    ModeBound mb;
    mb.k = k;
    try {
      mb.lower = lower_bound(n, alpha, beta, gamma, k);
      mb.lower_printed = lower_bound(n, alpha, beta, gamma, k, BoundForm::Printed);
    } catch (const Error&) {
      mb.lower = 0.0;
      mb.lower_printed = 0.0;
    }
    const SharpKEstimate est = estimate_sharp_k(n, alpha, beta, gamma, k, budget_per_k);
    mb.upper = est.upper;
    mb.family = est.family;
    br.budget_exhausted = br.budget_exhausted || est.budget_exhausted;
    br.per_k.push_back(mb);
    br.upper = std::min(br.upper, mb.upper);
    if (k == k_max) throw Error(ErrorKind::BudgetExceeded, "no truncation certificate up to k_max");
  }
  br.lower = std::numeric_limits<double>::infinity();
  for (const auto& mb : br.per_k) br.lower = std::min(br.lower, mb.lower);
  br.k_star = 0;
  for (const auto& mb : br.per_k) {
    if (mb.upper <= br.upper + 1e-6) {
      br.k_star = mb.k;
      break;
    }
  }
  return br;
}

}  // namespace ckn
