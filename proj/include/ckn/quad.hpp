#pragma once

// Adaptive Gauss-Kronrod quadrature on [0, inf) for the weighted radial
// integrands that appear throughout the library, plus closed-form Gaussian
// moments used as oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ckn/error.hpp"

namespace ckn {

enum class TailMap {
  Rational,     // r = s + (1 - y) / y
  Exponential,  // r = s - ln(y)
};

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  // Mandatory breakpoints; a node is always placed on each of them.
  std::vector<double> split_points;
  // Leading power of the integrand at r = 0. Negative values request a
  // deeper graded subdivision of the first panel.
  double small_r_exponent = 0.0;
  TailMap tail_map = TailMap::Rational;

  void validate() const {
    require(abs_tol > 0 && rel_tol > 0, ErrorKind::InvalidParameter,
            "quadrature tolerances must be positive");
    require(max_subdivisions >= 1, ErrorKind::InvalidParameter,
            "max_subdivisions must be >= 1");
    for (std::size_t i = 0; i < split_points.size(); ++i) {
      const double s = split_points[i];
      require(std::isfinite(s) && s > 0, ErrorKind::InvalidParameter,
              "split points must be finite and positive");
      require(i == 0 || split_points[i - 1] < s, ErrorKind::InvalidParameter,
              "split points must be strictly increasing");
    }
  }

  // Same spec with tolerances tightened by `factor` and the budget scaled.
  QuadratureSpec refined(double factor = 10.0, int budget_scale = 2) const {
    QuadratureSpec s = *this;
    s.abs_tol /= factor;
    s.rel_tol /= factor;
    s.max_subdivisions *= budget_scale;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Integral of r^(2m) e^(-r^2) over [0, inf) = Gamma(m + 1/2) / 2.
inline double gamma_half_moment(int m) {
  require(m >= 0, ErrorKind::InvalidParameter, "gamma_half_moment needs m >= 0");
  double g = std::sqrt(std::numbers::pi);  // Gamma(1/2)
  for (int j = 1; j <= m; ++j) g *= (j - 0.5);
  return 0.5 * g;
}

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 constants).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class G>
Panel gk15(G& g, double a, double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto eval = [&](double x) {
    const double v = g(x);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::DivergenceSuspected,
                  "non-finite integrand value at node " + std::to_string(x));
    }
    return v;
  };
  const double fc = eval(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = eval(center - dx);
    const double f2 = eval(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
  p.error = std::max(std::abs((kronrod - gauss) * half), roundoff);
  return p;
}

// Globally adaptive bisection over an initial panel set. `g` is the integrand
// in whatever variable the panels are expressed in.
template <class G>
QuadratureResult adapt(G& g, const std::vector<std::pair<double, double>>& initial,
                       const QuadratureSpec& spec) {
  QuadratureResult res;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double err = 0.0;
  for (const auto& [a, b] : initial) {
    if (!(b > a)) continue;
    Panel p = gk15(g, a, b, res.evaluations);
    total += p.value;
    err += p.error;
    heap.push(p);
  }

  std::vector<double> checkpoints;
  int next_checkpoint = 16;
  auto diverging = [&]() {
    const std::size_t m = checkpoints.size();
    if (m < 4) return false;
    const double v0 = std::abs(checkpoints[m - 4]);
    for (std::size_t j = m - 3; j < m; ++j) {
      if (!(std::abs(checkpoints[j]) > std::abs(checkpoints[j - 1]))) return false;
    }
    return std::abs(checkpoints[m - 1]) > 10.0 * v0 && v0 > 0.0;
  };

  int subdivisions = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (subdivisions >= spec.max_subdivisions || heap.empty()) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point; keep its estimate.
      worst.error = 0.0;
      heap.push(worst);
      break;
    }
    Panel left = gk15(g, worst.a, mid, res.evaluations);
    Panel right = gk15(g, mid, worst.b, res.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    if (subdivisions == next_checkpoint) {
      checkpoints.push_back(total);
      next_checkpoint *= 2;
      if (diverging()) {
        throw Error(ErrorKind::DivergenceSuspected,
                    "partial sums grow without bound across refinements");
      }
    }
  }

  // Recompute from the panels to shed accumulated cancellation in the
  // running sums.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.error_estimate = err;
  res.converged = err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return res;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline void add_graded(std::vector<std::pair<double, double>>& panels, double a, double b,
                       int levels) {
  // Geometric grading toward `a`: [a, a+h 2^-L], ..., [a+h/2, b].
  const double h = b - a;
  double lo = a;
  for (int j = levels; j >= 1; --j) {
    const double hi = a + h * std::ldexp(1.0, -j);
    panels.emplace_back(lo, hi);
    lo = hi;
  }
  panels.emplace_back(lo, b);
}

template <class F>
QuadratureResult integrate_mapped(F&& f, double r0, const QuadratureSpec& spec) {
  spec.validate();
  std::vector<double> breaks;
  for (double s : spec.split_points) {
    if (s > r0) breaks.push_back(s);
  }
  const bool from_origin = (r0 == 0.0);
  if (breaks.empty()) breaks.push_back(r0 + 1.0);
  const double tail_start = breaks.back();

  // Finite part in r, tail in y in (0, 1].
  std::vector<std::pair<double, double>> finite;
  double lo = r0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (i == 0 && from_origin) {
      const int levels = spec.small_r_exponent < 0 ? 24 : 6;
      add_graded(finite, lo, breaks[i], levels);
    } else {
      finite.emplace_back(lo, breaks[i]);
    }
    lo = breaks[i];
  }

  QuadratureSpec sub = spec;
  // Each part gets half of the absolute tolerance; the relative tolerance is
  // checked again on the combined result below.
  sub.abs_tol = 0.5 * spec.abs_tol;
  auto g_finite = [&](double r) { return f(r); };
  QuadratureResult head = adapt(g_finite, finite, sub);

  auto g_tail = [&](double y) {
    double r = 0.0;
    double jac = 0.0;
    if (spec.tail_map == TailMap::Rational) {
      r = tail_start + (1.0 - y) / y;
      jac = 1.0 / (y * y);
    } else {
      r = tail_start - std::log(y);
      jac = 1.0 / y;
    }
    if (!std::isfinite(r)) return 0.0;
    const double v = f(r);
    return v == 0.0 ? 0.0 : v * jac;
  };
  std::vector<std::pair<double, double>> tail_panels = {{0.0, 0.5}, {0.5, 1.0}};
  QuadratureResult tail = adapt(g_tail, tail_panels, sub);

  QuadratureResult out;
  out.value = head.value + tail.value;
  out.error_estimate = head.error_estimate + tail.error_estimate;
  out.evaluations = head.evaluations + tail.evaluations;
  out.converged =
      out.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  return out;
}

}  // namespace detail

// Integral of f over [0, inf). Returns the estimate with its error bound.
// Throws NonConvergence when the subdivision budget runs out above tolerance
// and DivergenceSuspected when partial sums blow up.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureSpec& spec = {}) {
  QuadratureResult res = detail::integrate_mapped(f, 0.0, spec);
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence,
                "error estimate " + detail::sci(res.error_estimate) + " above tolerance for value " +
                    detail::sci(res.value));
  }
  return res;
}

// Integral of f over [r0, inf), r0 >= 0.
template <class F>
QuadratureResult integrate_from(F&& f, double r0, const QuadratureSpec& spec = {}) {
  require(r0 >= 0 && std::isfinite(r0), ErrorKind::InvalidParameter, "lower limit must be finite and >= 0");
  QuadratureResult res = detail::integrate_mapped(f, r0, spec);
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence,
                "error estimate " + detail::sci(res.error_estimate) + " above tolerance for value " +
                    detail::sci(res.value));
  }
  return res;
}

// Integral of f over the finite interval [a, b].
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  require(std::isfinite(a) && std::isfinite(b) && a <= b, ErrorKind::InvalidParameter,
          "interval must be finite with a <= b");
  std::vector<std::pair<double, double>> panels;
  double lo = a;
  for (double s : spec.split_points) {
    if (s > a && s < b) {
      panels.emplace_back(lo, s);
      lo = s;
    }
  }
  panels.emplace_back(lo, b);
  auto g = [&](double r) { return f(r); };
  QuadratureResult res = detail::adapt(g, panels, spec);
  if (!res.converged) {
    throw Error(ErrorKind::NonConvergence, "finite-interval quadrature did not converge");
  }
  return res;
}

}  // namespace ckn
