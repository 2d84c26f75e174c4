#pragma once

// Hermite algebra for the Gaussian measure mu_n = pi^{-n/2} e^{-|x|^2} dx:
// closed-form product integrals, the quadratic form
//   Q(w) = int |grad w|^2 dmu + n int w^2 dmu - int |x|^2 w^2 dmu
// in the orthonormal basis H_I(sqrt 2 x) / sqrt(I!), and its spectral gap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "ckn/eigen.hpp"
#include "ckn/error.hpp"
#include "ckn/functionals.hpp"
#include "ckn/hermite_poly.hpp"
#include "ckn/profiles.hpp"

namespace ckn {

// int t^2 H_i H_j dgamma_1 (standard Gaussian).
inline double x2_product_integral(int i, int j, HermiteConvention conv = HermiteConvention::ProbabilistUnnormalized) {
  require(i >= 0 && j >= 0, ErrorKind::InvalidParameter, "Hermite indices must be >= 0");
  const bool normalized = conv == HermiteConvention::ProbabilistNormalized;
  if (i == j) return normalized ? 2.0 * i + 1.0 : (2.0 * i + 1.0) * factorial(i);
  if (std::abs(i - j) == 2) {
    const int m = std::min(i, j);
    return normalized ? std::sqrt((m + 1.0) * (m + 2.0)) : factorial(m + 2);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Exact polynomial check of t^2 H_i = H_{i+2} + (2i+1) H_i + c H_{i-2}

using IntPoly = std::vector<std::int64_t>;  // coefficient of t^d at index d

inline IntPoly hermite_coefficients(int i) {
  require(i >= 0 && i <= 30, ErrorKind::InvalidParameter, "exact Hermite coefficients need 0 <= i <= 30");
  IntPoly prev{1};
  if (i == 0) return prev;
  IntPoly cur{0, 1};
  for (int m = 1; m < i; ++m) {
    IntPoly next(cur.size() + 1, 0);
    for (std::size_t d = 0; d < cur.size(); ++d) next[d + 1] += cur[d];
    for (std::size_t d = 0; d < prev.size(); ++d) next[d] -= static_cast<std::int64_t>(m) * prev[d];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

struct ExpansionCheck {
  int i = 0;
  // Coefficient i(i-1) on H_{i-2}.
  double residual = 0.0;
  IntPoly difference;
  // Coefficient (i-1) on H_{i-2}.
  double residual_printed = 0.0;
  IntPoly difference_printed;
};

inline ExpansionCheck t2_expansion_check(int i) {
  require(i >= 2 && i <= 28, ErrorKind::InvalidParameter, "t2_expansion_check needs 2 <= i <= 28");
  const IntPoly hi = hermite_coefficients(i);
  const IntPoly hp = hermite_coefficients(i + 2);
  const IntPoly hm = hermite_coefficients(i - 2);
  auto diff = [&](std::int64_t c) {
    IntPoly d(static_cast<std::size_t>(i) + 3, 0);
    for (std::size_t k = 0; k < hi.size(); ++k) d[k + 2] += hi[k];
    for (std::size_t k = 0; k < hp.size(); ++k) d[k] -= hp[k];
    for (std::size_t k = 0; k < hi.size(); ++k) d[k] -= (2 * i + 1) * hi[k];
    for (std::size_t k = 0; k < hm.size(); ++k) d[k] -= c * hm[k];
    return d;
  };
  // Max over a grid on [-5, 5] of |sum d_k t^k|.
  auto grid_norm = [](const IntPoly& d) {
    double m = 0.0;
    for (int g = 0; g <= 1000; ++g) {
      const double t = -5.0 + 0.01 * g;
      double v = 0.0;
      for (std::size_t k = d.size(); k-- > 0;) v = v * t + static_cast<double>(d[k]);
      m = std::max(m, std::abs(v));
    }
    return m;
  };
  ExpansionCheck r;
  r.i = i;
  r.difference = diff(static_cast<std::int64_t>(i) * (i - 1));
  r.residual = grid_norm(r.difference);
  r.difference_printed = diff(i - 1);
  r.residual_printed = grid_norm(r.difference_printed);
  return r;
}

// ---------------------------------------------------------------------------
// Gauss rule for the standard Gaussian measure (weights sum to 1).

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_hermite_rule(int m) {
  require(m >= 1 && m <= 150, ErrorKind::InvalidParameter, "rule size must be in [1, 150]");
  // Eigenvalues of the Jacobi matrix seed Newton on the normalized recurrence.
  SymMatrix J(static_cast<std::size_t>(m));
  for (int i = 1; i < m; ++i) J.set(i - 1, i, std::sqrt(static_cast<double>(i)));
  const auto eig = sym_eig(J);
  // Orthonormal p_m(x) and p_{m-1}(x).
  auto top = [m](double x) {
    double pm1 = 0.0, pm = 1.0;
    for (int j = 0; j < m; ++j) {
      const double next = (x * pm - std::sqrt(static_cast<double>(j)) * pm1) / std::sqrt(j + 1.0);
      pm1 = pm;
      pm = next;
    }
    return std::pair{pm, pm1};
  };
  GaussRule rule;
  for (int k = 0; k < m; ++k) {
    double x = eig.values[k];
    for (int it = 0; it < 8; ++it) {
      const auto [pm, pm1] = top(x);
      const double step = pm / (std::sqrt(static_cast<double>(m)) * pm1);
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    double s = 0.0, pm1 = 0.0, pm = 1.0;
    for (int j = 0; j < m; ++j) {
      s += pm * pm;
      const double next = (x * pm - std::sqrt(static_cast<double>(j)) * pm1) / std::sqrt(j + 1.0);
      pm1 = pm;
      pm = next;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(1.0 / s);
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Multi-index basis

using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& I) {
  int s = 0;
  for (int v : I) s += v;
  return s;
}

// All I in Z_+^n with |I| <= D, ordered by |I| then lexicographically.
inline std::vector<MultiIndex> multi_indices(int n, int D) {
  require(n >= 1 && D >= 0, ErrorKind::InvalidParameter, "need n >= 1, D >= 0");
  std::vector<MultiIndex> out;
  MultiIndex I(n, 0);
  for (int d = 0; d <= D; ++d) {
    // Enumerate compositions of d into n parts, lexicographically decreasing first entry.
    std::vector<MultiIndex> level;
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        I[pos] = left;
        level.push_back(I);
        return;
      }
      for (int v = left; v >= 0; --v) {
        I[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// H_I(sqrt 2 x) / sqrt(I!) and its partial derivatives, orthonormal in L^2(mu_n).
inline double hermite_basis_value(const MultiIndex& I, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t j = 0; j < I.size(); ++j) v *= hermite_eval(I[j], std::sqrt(2.0) * x[j], HermiteConvention::ProbabilistNormalized);
  return v;
}

inline std::vector<double> hermite_basis_gradient(const MultiIndex& I, std::span<const double> x) {
  std::vector<double> g(I.size(), 1.0);
  for (std::size_t j = 0; j < I.size(); ++j) {
    for (std::size_t l = 0; l < I.size(); ++l) {
      const double t = std::sqrt(2.0) * x[l];
      g[j] *= l == j ? std::sqrt(2.0) * hermite_deriv(I[l], t, HermiteConvention::ProbabilistNormalized)
                     : hermite_eval(I[l], t, HermiteConvention::ProbabilistNormalized);
    }
  }
  return g;
}

// max over a grid in [-2, 2]^n of |Lap H_I - 2 x . grad H_I + 2|I| H_I|, derivatives from the recurrences.
inline double ou_eigen_residual(const MultiIndex& I, int n) {
  require(static_cast<int>(I.size()) == n && n >= 1 && n <= 4, ErrorKind::InvalidParameter, "need |I| = n and 1 <= n <= 4");
  require(total_degree(I) <= 10, ErrorKind::InvalidParameter, "need |I| <= 10");
  const int pts = 9;
  std::vector<int> idx(n, 0);
  double worst = 0.0;
  const double s2 = std::sqrt(2.0);
  while (true) {
    std::vector<double> t(n), h(n), dh(n), d2h(n);
    for (int j = 0; j < n; ++j) {
      const double x = -2.0 + 4.0 * idx[j] / (pts - 1);
      t[j] = s2 * x;
      h[j] = hermite_eval(I[j], t[j]);
      dh[j] = s2 * hermite_deriv(I[j], t[j]);
      d2h[j] = 2.0 * hermite_deriv2(I[j], t[j]);
    }
    double val = 1.0;
    for (int j = 0; j < n; ++j) val *= h[j];
    double lap = 0.0, drift = 0.0;
    for (int j = 0; j < n; ++j) {
      double rest = 1.0;
      for (int l = 0; l < n; ++l) {
        if (l != j) rest *= h[l];
      }
      lap += d2h[j] * rest;
      drift += (t[j] / s2) * dh[j] * rest;
    }
    worst = std::max(worst, std::abs(lap - 2.0 * drift + 2.0 * total_degree(I) * val));
    int j = 0;
    while (j < n && ++idx[j] == pts) idx[j++] = 0;
    if (j == n) break;
  }
  return worst;
}

struct QAssembly {
  SymMatrix Q;
  std::vector<MultiIndex> basis;
};

inline constexpr std::size_t kMaxHermiteBasis = 20000;

inline QAssembly assemble_Q(int n, int D) {
  require(n >= 1 && D >= 0, ErrorKind::InvalidParameter, "need n >= 1, D >= 0");
  // Size C(D+n, n), checked before enumeration.
  double size = 1.0;
  for (int j = 1; j <= n; ++j) size = size * (D + j) / j;
  if (size > static_cast<double>(kMaxHermiteBasis)) {
    throw Error(ErrorKind::BudgetExceeded, "basis size " + std::to_string(static_cast<long long>(size)) + " exceeds 20000");
  }
  QAssembly qa;
  qa.basis = multi_indices(n, D);
  const std::size_t N = qa.basis.size();
  qa.Q = SymMatrix(N);
  std::map<MultiIndex, std::size_t> where;
  for (std::size_t a = 0; a < N; ++a) where[qa.basis[a]] = a;
  for (std::size_t a = 0; a < N; ++a) {
    const MultiIndex& I = qa.basis[a];
    qa.Q.set(a, a, total_degree(I) + 0.5 * n);
    for (int j = 0; j < n; ++j) {
      MultiIndex J = I;
      J[j] += 2;
      auto it = where.find(J);
      if (it == where.end()) continue;
      const double m = I[j];
      qa.Q.set(a, it->second, -0.5 * std::sqrt((m + 1.0) * (m + 2.0)));
    }
  }
  return qa;
}

struct SpectralGapReport {
  int n = 0;
  int D = 0;
  double gap = 0.0;
  double claimed = 0.0;
  bool meets_claim = false;
  std::vector<double> sequence;  // gap for D' = 0..D
};

namespace detail {

// Minimum eigenvalue over the per-coordinate parity blocks.
inline double block_min_eig(const QAssembly& qa, std::size_t limit) {
  std::map<std::vector<int>, std::vector<std::size_t>> blocks;
  for (std::size_t a = 0; a < limit; ++a) {
    std::vector<int> key(qa.basis[a].size());
    for (std::size_t j = 0; j < key.size(); ++j) key[j] = qa.basis[a][j] % 2;
    blocks[key].push_back(a);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [key, ids] : blocks) {
    SymMatrix B(ids.size());
    for (std::size_t p = 0; p < ids.size(); ++p) {
      for (std::size_t q = p; q < ids.size(); ++q) B.set(p, q, qa.Q(ids[p], ids[q]));
    }
    best = std::min(best, sym_eig_min(B).value);
  }
  return best;
}

}  // namespace detail

inline SpectralGapReport spectral_gap(int n, int D) {
  const QAssembly qa = assemble_Q(n, D);
  SpectralGapReport rep;
  rep.n = n;
  rep.D = D;
  rep.claimed = std::min(1.0, n / 4.0);
  // Basis is ordered by degree, so each prefix is the span for a smaller D.
  std::size_t limit = 0;
  for (int d = 0; d <= D; ++d) {
    while (limit < qa.basis.size() && total_degree(qa.basis[limit]) <= d) ++limit;
    rep.sequence.push_back(detail::block_min_eig(qa, limit));
  }
  rep.gap = rep.sequence.back();
  rep.meets_claim = rep.gap >= rep.claimed - 1e-9;
  return rep;
}

// ---------------------------------------------------------------------------

struct HermiteExpansion {
  int n = 1;
  int degree_cutoff = 0;
  std::map<MultiIndex, double> coeffs;  // orthonormal basis

  void set(const MultiIndex& I, double a) {
    require(static_cast<int>(I.size()) == n, ErrorKind::InvalidParameter, "multi-index has the wrong length");
    require(total_degree(I) <= degree_cutoff, ErrorKind::InvalidParameter, "multi-index exceeds the degree cutoff");
    coeffs[I] = a;
  }
  double value(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& [I, a] : coeffs) v += a * hermite_basis_value(I, x);
    return v;
  }
};

struct PoincarePair {
  double lhs = 0.0;  // int |grad w|^2 dmu
  double rhs = 0.0;  // 2 int |w - mean|^2 dmu
};

inline PoincarePair poincare_residual(const HermiteExpansion& w) {
  PoincarePair p;
  for (const auto& [I, a] : w.coeffs) {
    const int d = total_degree(I);
    p.lhs += 2.0 * d * a * a;
    if (d >= 1) p.rhs += 2.0 * a * a;
  }
  return p;
}

// a^T Q a for the expansion's coefficients.
inline double q_form(const HermiteExpansion& w) {
  const QAssembly qa = assemble_Q(w.n, w.degree_cutoff);
  std::vector<double> a(qa.basis.size(), 0.0);
  for (std::size_t k = 0; k < qa.basis.size(); ++k) {
    auto it = w.coeffs.find(qa.basis[k]);
    if (it != w.coeffs.end()) a[k] = it->second;
  }
  return qa.Q.quadratic_form(a);
}

struct LemmaC1Check {
  double lhs = 0.0;  // inf_c int |grad[(v - c) e^{-|x|^2/2}]|^2
  double rhs = 0.0;  // ((n+2)/2) int |grad v|^2 e^{-|x|^2}
  double c_opt = 0.0;
};

inline LemmaC1Check lemma_c1_check(const RadialProfile& v, int n, const QuadratureSpec& spec = functional_spec()) {
  require(n >= 1, ErrorKind::InvalidParameter, "need n >= 1");
  // |grad w|^2 = (v' - r v + r c)^2 e^{-r^2}: quadratic P0 + 2 c P1 + c^2 P2.
  auto weight = [n](double r) { return std::exp(-r * r) * std::pow(r, n - 1); };
  const double p0 = detail::sphere_integral("P0", n, [&](double r) { const double d = v.du(r) - r * v.u(r); return d * d * weight(r); }, v, n - 1, spec).value;
  const double p1 = detail::sphere_integral("P1", n, [&](double r) { return r * (v.du(r) - r * v.u(r)) * weight(r); }, v, n, spec).value;
  const double p2 = detail::sphere_integral("P2", n, [&](double r) { return r * r * weight(r); }, v, n + 1, spec).value;
  const double g = detail::sphere_integral("G", n, [&](double r) { const double d = v.du(r); return d * d * weight(r); }, v, n - 1, spec).value;
  LemmaC1Check out;
  out.c_opt = -p1 / p2;
  out.lhs = p0 - p1 * p1 / p2;
  out.rhs = 0.5 * (n + 2.0) * g;
  return out;
}

}  // namespace ckn
