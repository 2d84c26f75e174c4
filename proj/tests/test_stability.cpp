#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "ckn/profile_dsl.hpp"
#include "ckn/stability.hpp"

using namespace ckn;

namespace {

// Best distance over a dense log grid of a, with the optimal c for each a.
double grid_distance(const RadialProfile& u, int n, Metric m, bool constrained) {
  const QuadratureSpec spec = stability_spec();
  const double nu = detail::metric_norm_sq(u, n, m, spec);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double a = std::exp(-4.0 + 8.0 * i / 400);
    const double ng = detail::gaussian_norm_sq(n, a, m);
    const double ip = detail::gaussian_inner(u, n, a, m, spec);
    const double c = best_c(ip, nu, ng, constrained);
    best = std::min(best, nu - 2 * c * ip + c * c * ng);
  }
  return best;
}

// ||u - v||^2 in the metric.
double diff_norm_sq(const RadialProfile& u, const RadialProfile& v, int n, Metric m) {
  QuadratureSpec spec = stability_spec();
  spec.split_points = {0.5, 1.0, 2.0, 4.0};
  const auto r = integrate_semi_infinite(
      [&](double r) {
        const double d = m == Metric::PlainL2 ? u.u(r) - v.u(r) : u.du(r) - v.du(r);
        return d * d * std::pow(r, n - 1);
      },
      spec);
  return surface_area(n) * r.value;
}

}  // namespace

TEST(Stability, GaussianNormsClosedForm) {
  for (int n : {1, 3}) {
    for (double a : {0.4, 1.3}) {
      const RadialProfile g = make_gauss(a);
      EXPECT_NEAR(detail::metric_norm_sq(g, n, Metric::PlainL2, stability_spec()), detail::gaussian_norm_sq(n, a, Metric::PlainL2), 1e-11);
      EXPECT_NEAR(detail::metric_norm_sq(g, n, Metric::GradientL2, stability_spec()), detail::gaussian_norm_sq(n, a, Metric::GradientL2), 1e-11);
    }
  }
}

TEST(Stability, GaussianDeficitVanishes) {
  for (int n : {1, 2, 3, 5}) {
    for (double a : {0.3, 0.5, 1.0, 2.0}) {
      const DeficitValue d = delta_deficit(make_gauss(a), n);
      EXPECT_LE(std::abs(d.delta), 1e-9) << n << " " << a;
    }
  }
}

TEST(Stability, GaussianProjectsOntoItself) {
  const RadialProfile u = scaled(make_gauss(0.7), 2.0);
  for (Metric m : {Metric::GradientL2, Metric::PlainL2}) {
    for (bool constrained : {false, true}) {
      const ProjectionResult p = project(u, 3, m, constrained);
      EXPECT_NEAR(p.candidate.c, 2.0, 1e-6);
      EXPECT_NEAR(p.candidate.a, 0.7, 1e-6);
      EXPECT_LE(p.relative_distance, 1e-10);
    }
  }
}

TEST(Stability, ProjectionBeatsDenseGrid) {
  for (const char* s : {"hermmod(0.2,4,0.5)", "bump(2,0.5)", "u0(0.5)", "polygauss(0.8; -1,0,2,0,-0.2)"}) {
    const RadialProfile u = make_family(s);
    for (int n : {1, 3}) {
      for (Metric m : {Metric::GradientL2, Metric::PlainL2}) {
        for (bool constrained : {false, true}) {
          const ProjectionResult p = project(u, n, m, constrained);
          const double g = grid_distance(u, n, m, constrained);
          EXPECT_LE(p.distance_sq, g + 1e-9 * p.norm_sq) << s << " n=" << n << " " << to_string(m) << " " << constrained;
          EXPECT_FALSE(p.at_boundary) << s;
        }
      }
    }
  }
}

TEST(Stability, ConstrainedCandidateHasMatchingNorm) {
  const RadialProfile u = make_family("hermmod(0.2,2,0.5)");
  for (Metric m : {Metric::GradientL2, Metric::PlainL2}) {
    const ProjectionResult p = project(u, 2, m, true);
    const double cg = p.candidate.c * p.candidate.c * detail::gaussian_norm_sq(2, p.candidate.a, m);
    EXPECT_NEAR(cg, p.norm_sq, 1e-12 * p.norm_sq);
    EXPECT_GE(p.distance_sq, project(u, 2, m, false).distance_sq - 1e-12);
  }
}

TEST(Stability, DistanceToGaussianSetIsOneLipschitz) {
  const RadialProfile u = make_family("hermmod(0.2,4,0.5)");
  const RadialProfile v = make_family("hermmod(0.05,2,0.6)");
  for (Metric m : {Metric::GradientL2, Metric::PlainL2}) {
    const double du = std::sqrt(project(u, 3, m, false).distance_sq);
    const double dv = std::sqrt(project(v, 3, m, false).distance_sq);
    const double uv = std::sqrt(diff_norm_sq(u, v, 3, m));
    EXPECT_LE(du, dv + uv + 1e-9);
    EXPECT_LE(dv, du + uv + 1e-9);
  }
}

TEST(Stability, InvariantUnderScalingAndDilation) {
  const RadialProfile u = make_family("hermmod(0.2,6,0.5)");
  const StabilityReport base = stability_report_gradient(u, 3);
  const StabilityReport sc = stability_report_gradient(scaled(u, -3.0), 3);
  const StabilityReport dl = stability_report_gradient(dilated(u, 1.6, 3), 3);
  EXPECT_NEAR(sc.delta, base.delta, 1e-9);
  EXPECT_NEAR(dl.delta, base.delta, 1e-9);
  EXPECT_NEAR(sc.relative_distance, base.relative_distance, 1e-8);
  EXPECT_NEAR(dl.relative_distance, base.relative_distance, 1e-8);
}

TEST(Stability, TheoremsHoldOnSamples) {
  for (const char* s : {"hermmod(0.05,4,0.5)", "hermmod(0.2,6,1)", "bump(2,0.5)", "u1(0,0)"}) {
    for (int n : {1, 2, 3, 5}) {
      const RadialProfile u = make_family(s);
      const StabilityReport g = stability_report_gradient(u, n);
      const StabilityReport l = stability_report_l2(u, n);
      EXPECT_TRUE(g.satisfied) << s << " n=" << n;
      EXPECT_TRUE(l.satisfied) << s << " n=" << n;
      EXPECT_GE(g.delta, -1e-12);
      EXPECT_DOUBLE_EQ(g.theorem_coefficient, stability_constant(n) / (16.0 * (n + 2) * (n + 2)));
      EXPECT_DOUBLE_EQ(l.theorem_coefficient, stability_constant(n) / (16.0 * n * (n + 2)));
    }
  }
}

TEST(Stability, ZeroProfileRejected) {
  EXPECT_THROW(delta_deficit(scaled(make_gauss(1), 0.0), 3), Error);
  EXPECT_THROW(project(scaled(make_gauss(1), 0.0), 3, Metric::PlainL2, true), Error);
}

TEST(Stability, HydrogenProfileAgainstFineGrid) {
  const RadialProfile u = make_u1(0, 0);
  const QuadratureSpec spec = stability_spec();
  const double nu = detail::metric_norm_sq(u, 3, Metric::GradientL2, spec);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10000; ++i) {
    const double a = std::exp(-4.0 + 8.0 * i / 9999);
    const double ip = detail::gaussian_inner(u, 3, a, Metric::GradientL2, spec);
    best = std::min(best, nu - ip * ip / detail::gaussian_norm_sq(3, a, Metric::GradientL2));
  }
  const ProjectionResult p = project(u, 3, Metric::GradientL2, false);
  EXPECT_NEAR(p.distance_sq, best, 1e-7 * nu);
  EXPECT_LE(p.distance_sq, best + 1e-10 * nu);
}
