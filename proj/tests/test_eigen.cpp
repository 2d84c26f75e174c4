#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ckn/eigen.hpp"

using namespace ckn;

namespace {

// Sturm count: number of eigenvalues of the tridiagonal (d, e) below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

double bisect_kth(const std::vector<double>& d, const std::vector<double>& e, int k) {
  double lo = -100.0, hi = 100.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) > k) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Eigen, DiagonalMatrix) {
  SymMatrix m(3);
  m.set(0, 0, 3.0);
  m.set(1, 1, -1.0);
  m.set(2, 2, 2.0);
  const auto d = sym_eig(m);
  EXPECT_DOUBLE_EQ(d.values[0], -1.0);
  EXPECT_DOUBLE_EQ(d.values[2], 3.0);
  EXPECT_DOUBLE_EQ(sym_eig_min(m).value, -1.0);
}

TEST(Eigen, TwoByTwoClosedForm) {
  SymMatrix m(2);
  m.set(0, 0, 0.5);
  m.set(1, 1, 2.5);
  m.set(0, 1, -std::sqrt(2.0) / 2.0);
  EXPECT_NEAR(sym_eig_min(m).value, (3.0 - std::sqrt(6.0)) / 2.0, 1e-15);
}

TEST(Eigen, TridiagonalAgainstSturmBisection) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const int n = 25;
  std::vector<double> d(n), e(n - 1);
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, d[i] = u(rng));
  for (int i = 0; i + 1 < n; ++i) m.set(i, i + 1, e[i] = u(rng));
  const auto eig = sym_eig(m);
  for (int k = 0; k < n; ++k) EXPECT_NEAR(eig.values[k], bisect_kth(d, e, k), 1e-12) << k;
}

TEST(Eigen, ResidualAndOrthonormality) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const int n = 30;
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, g(rng));
  const auto eig = sym_eig(m);
  EXPECT_TRUE(std::is_sorted(eig.values.begin(), eig.values.end()));
  for (int k = 0; k < n; ++k) {
    const auto& v = eig.vectors[k];
    const auto mv = m.apply(v);
    double res = 0.0;
    for (int i = 0; i < n; ++i) res = std::max(res, std::abs(mv[i] - eig.values[k] * v[i]));
    EXPECT_LE(res, 1e-10 * m.frobenius_norm());
    EXPECT_NEAR(m.quadratic_form(v), eig.values[k], 1e-10 * m.frobenius_norm());
    for (int l = 0; l <= k; ++l) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += v[i] * eig.vectors[l][i];
      EXPECT_NEAR(dot, k == l ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Eigen, TraceIsPreserved) {
  SymMatrix m(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m.set(i, j, 1.0 / (i + j + 1.0));
  const auto eig = sym_eig(m);
  double tr = 0.0;
  for (double v : eig.values) tr += v;
  EXPECT_NEAR(tr, 1.0 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7, 1e-14);
  EXPECT_GT(eig.values.front(), 0.0);
}

TEST(Minimize1D, Parabola) {
  const auto m = minimize_1d([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, -1.0, 2.0);
  EXPECT_NEAR(m.x, 0.3, 1e-7);
  EXPECT_NEAR(m.f, 2.0, 1e-13);
  EXPECT_FALSE(m.at_boundary);
}

TEST(Minimize1D, MonotoneHitsBoundary) {
  const auto m = minimize_1d([](double x) { return x; }, 0.0, 1.0);
  EXPECT_TRUE(m.at_boundary);
  EXPECT_NEAR(m.x, 0.0, 1e-6);
}

TEST(Multistart, Rosenbrock) {
  auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  MultistartOptions opt;
  opt.budget = 6000;
  const auto m = minimize_multistart(f, {{-1.2, 1.0}, {2.0, 2.0}}, opt);
  EXPECT_LT(m.f, 1e-8);
  EXPECT_NEAR(m.x[0], 1.0, 1e-3);
  EXPECT_LE(m.evaluations, opt.budget + 10);
}

TEST(Multistart, DeterministicForSameSeeds) {
  auto f = [](std::span<const double> x) { return std::cos(3 * x[0]) + x[0] * x[0] + std::pow(x[1] - 1, 2); };
  const auto a = minimize_multistart(f, {{0.5, 0.0}, {-2.0, 3.0}});
  const auto b = minimize_multistart(f, {{0.5, 0.0}, {-2.0, 3.0}});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.f, b.f);
}

TEST(Multistart, RejectsBadSeeds) {
  auto f = [](std::span<const double> x) { return x[0]; };
  EXPECT_THROW(minimize_multistart(f, {}), Error);
  EXPECT_THROW(minimize_multistart(f, {{1.0}, {1.0, 2.0}}), Error);
}

TEST(Minimize1D, SpecExamples) {
  EXPECT_NEAR(minimize_1d([](double a) { return (a - 2) * (a - 2); }, 0.0, 5.0).x, 2.0, 1e-7);
  EXPECT_NEAR(minimize_1d([](double l) { return l * l + 1.0 / (l * l); }, 0.1, 10.0).x, 1.0, 1e-7);
}

TEST(Minimize1D, NoWorseThanDenseGridOnUnimodalFunctions) {
  const std::vector<std::function<double(double)>> fs = {
      [](double x) { return std::abs(x - 0.3); },
      [](double x) { return std::exp(x) - 3 * x; },
      [](double x) { return std::cosh(4 * (x + 0.7)); },
      [](double x) { return -std::exp(-x * x) * (1 + x / 3); },
      [](double x) { return x * x * x; },
  };
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const double lo = -1.5, hi = 2.0;
    double grid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) grid = std::min(grid, fs[k](lo + (hi - lo) * i / 999));
    const auto m = minimize_1d(fs[k], lo, hi);
    EXPECT_LE(m.f, grid + 1e-9) << k;
    EXPECT_EQ(m.f, minimize_1d(fs[k], lo, hi).f) << k;
  }
}
