#pragma once

// Small dense numeric kernels: a cyclic Jacobi eigensolver for symmetric
// matrices, golden-section line minimization and a multistart Nelder-Mead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ckn/error.hpp"

namespace ckn {

// Dense symmetric matrix; only the upper triangle is stored, so symmetry
// holds by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

  std::size_t dim() const { return dim_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }
  void add(std::size_t i, std::size_t j, double v) { data_[index(i, j)] += v; }

  double frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i; j < dim_; ++j) {
        const double v = (*this)(i, j);
        s += (i == j ? 1.0 : 2.0) * v * v;
      }
    }
    return std::sqrt(s);
  }

  // y = M x
  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
  }

  double quadratic_form(std::span<const double> x) const {
    const auto y = apply(x);
    return std::inner_product(y.begin(), y.end(), x.begin(), 0.0);
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i - 1) / 2 + (j - i);
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
  int sweeps = 0;
};

// Full eigendecomposition by cyclic Jacobi rotations. Sweeps continue until
// the off-diagonal norm is below 1e-13 * ||M||.
inline EigenDecomposition sym_eig(const SymMatrix& m, int max_sweeps = 100) {
  const std::size_t n = m.dim();
  require(n >= 1, ErrorKind::InvalidParameter, "eigenproblem needs dim >= 1");
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = m(i, j);
      require(std::isfinite(a[i * n + j]), ErrorKind::InvalidParameter, "matrix entries must be finite");
    }
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = std::max(m.frobenius_norm(), std::numeric_limits<double>::min());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    }
    return std::sqrt(s);
  };

  EigenDecomposition out;
  int sweep = 0;
  while (off_norm() > 1e-13 * scale) {
    if (sweep >= max_sweeps) {
      throw Error(ErrorKind::EigensolveFailure, "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  for (std::size_t k : order) {
    out.values.push_back(a[k * n + k]);
    std::vector<double> vec(n);
    for (std::size_t i = 0; i < n; ++i) vec[i] = v[i * n + k];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

inline EigenPair sym_eig_min(const SymMatrix& m) {
  auto d = sym_eig(m);
  return {d.values.front(), std::move(d.vectors.front())};
}

struct Minimum1D {
  double x = 0.0;
  double f = 0.0;
  bool at_boundary = false;  // minimum sits on the bracket edge
  int evaluations = 0;
};

// Golden-section search on [lo, hi] down to width 1e-10 (hi - lo), followed by
// one parabolic step through the final three points.
inline Minimum1D minimize_1d(const std::function<double(double)>& f, double lo, double hi) {
  require(lo < hi && std::isfinite(lo) && std::isfinite(hi), ErrorKind::InvalidParameter,
          "minimize_1d needs a finite bracket lo < hi");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double width0 = hi - lo;
  Minimum1D out;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  out.evaluations = 2;
  while (b - a > 1e-10 * width0) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  double x = fc <= fd ? c : d;
  double fx = std::min(fc, fd);

  // Parabolic refinement through (x - h, x, x + h).
  const double h = std::max(b - a, 1e-12 * width0);
  if (x - h > lo && x + h < hi) {
    const double f0 = f(x - h);
    const double f2 = f(x + h);
    out.evaluations += 2;
    const double denom = f0 - 2.0 * fx + f2;
    if (denom > 0) {
      const double xp = x + 0.5 * h * (f0 - f2) / denom;
      if (std::abs(xp - x) <= h) {
        const double fp = f(xp);
        ++out.evaluations;
        if (fp < fx) {
          x = xp;
          fx = fp;
        }
      }
    }
  }
  // Compare against the bracket ends to detect a boundary minimum.
  const double flo = f(lo);
  const double fhi = f(hi);
  out.evaluations += 2;
  if (flo <= fx || fhi <= fx) {
    out.at_boundary = true;
    if (flo <= fhi) {
      x = lo;
      fx = flo;
    } else {
      x = hi;
      fx = fhi;
    }
  } else {
    const double edge_tol = 1e-8 * width0;
    out.at_boundary = (x - lo < edge_tol) || (hi - x < edge_tol);
  }
  out.x = x;
  out.f = fx;
  return out;
}

struct MinimumND {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  bool budget_exhausted = false;
};

struct MultistartOptions {
  long budget = 2000;          // total objective evaluations across all seeds
  double initial_step = 0.25;  // simplex edge relative to max(|x_i|, 1)
  double ftol = 1e-14;         // simplex spread at which a local run restarts
  int max_restarts = 6;
};

namespace detail {

// One Nelder-Mead run with restarts from the current best vertex.
// Returns true when the run stopped on the budget rather than on convergence.
inline bool nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                        const MultistartOptions& opt, long budget, MinimumND& best) {
  const std::size_t m = x0.size();
  long used = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++used;
    ++best.evaluations;
    double v = f(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    if (v < best.f) {
      best.f = v;
      best.x = x;
    }
    return v;
  };

  std::vector<double> start = std::move(x0);
  double start_f = eval(start);
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<std::vector<double>> simplex(m + 1, start);
    std::vector<double> fs(m + 1, start_f);
    for (std::size_t i = 0; i < m; ++i) {
      const double step = opt.initial_step * std::max(std::abs(start[i]), 1.0) / (1 << std::min(restart, 4));
      simplex[i + 1][i] += step;
      if (used >= budget) return true;
      fs[i + 1] = eval(simplex[i + 1]);
    }
    bool converged = false;
    while (used < budget) {
      std::vector<std::size_t> idx(m + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      {
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (auto i : idx) {
          s2.push_back(simplex[i]);
          f2.push_back(fs[i]);
        }
        simplex.swap(s2);
        fs.swap(f2);
      }
      const double spread = std::abs(fs[m] - fs[0]);
      if (std::isfinite(fs[m]) && spread <= opt.ftol * (std::abs(fs[0]) + opt.ftol)) {
        converged = true;
        break;
      }
      std::vector<double> centroid(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) centroid[j] += simplex[i][j] / static_cast<double>(m);
      }
      auto along = [&](double t) {
        std::vector<double> p(m);
        for (std::size_t j = 0; j < m; ++j) p[j] = centroid[j] + t * (simplex[m][j] - centroid[j]);
        return p;
      };
      auto xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < fs[0]) {
        if (used >= budget) break;
        auto xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[m] = xe;
          fs[m] = fe;
        } else {
          simplex[m] = xr;
          fs[m] = fr;
        }
      } else if (fr < fs[m - 1]) {
        simplex[m] = xr;
        fs[m] = fr;
      } else {
        if (used >= budget) break;
        const bool outside = fr < fs[m];
        auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fs[m])) {
          simplex[m] = xc;
          fs[m] = fc;
        } else {
          for (std::size_t i = 1; i <= m; ++i) {
            if (used >= budget) break;
            for (std::size_t j = 0; j < m; ++j) simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            fs[i] = eval(simplex[i]);
          }
        }
      }
    }
    if (!converged) return true;
    start = best.x;
    start_f = best.f;
  }
  return false;
}

}  // namespace detail

// Derivative-free local search from each seed in order; returns the best point.
// The budget is shared evenly across seeds, so results depend only on the
// seeds and the budget.
inline MinimumND minimize_multistart(const std::function<double(std::span<const double>)>& f,
                                     const std::vector<std::vector<double>>& seeds,
                                     const MultistartOptions& opt = {}) {
  require(!seeds.empty(), ErrorKind::InvalidParameter, "minimize_multistart needs at least one seed");
  const std::size_t m = seeds.front().size();
  require(m >= 1 && m <= 32, ErrorKind::InvalidParameter, "dimension must be in [1, 32]");
  for (const auto& s : seeds) {
    require(s.size() == m, ErrorKind::InvalidParameter, "all seeds must share one dimension");
  }
  MinimumND best;
  best.x = seeds.front();
  const long per_seed = std::max<long>(opt.budget / static_cast<long>(seeds.size()), static_cast<long>(m + 2));
  for (const auto& s : seeds) {
    if (detail::nelder_mead(f, s, opt, per_seed, best)) best.budget_exhausted = true;
  }
  return best;
}

}  // namespace ckn
