// Brackets the t = 2 sharp constant for a few weight choices and prints the per-mode table.
#include <cstdio>
#include <vector>

#include "ckn/ckn.hpp"

int main() {
  struct Case { int n; double alpha, beta; };
  const std::vector<Case> cases = {{3, 0, -2}, {5, 0, 0}, {4, 0.25, -1}, {2, 0.5, -1}};
  for (const auto& c : cases) {
    const double gamma = ckn::InequalityParams::balanced_gamma(c.alpha, c.beta, 2);
    const auto b = ckn::min_over_k(c.n, c.alpha, c.beta, gamma, 600);
    std::printf("n=%d alpha=%g beta=%g gamma=%g: k*=%d  [%.10g, %.10g]  modes scanned to %d, tail bound %.4g\n", c.n,
                c.alpha, c.beta, gamma, b.k_star, b.lower, b.upper, b.truncation_k, b.tail_bound);
    for (const auto& m : b.per_k) {
      std::printf("   k=%-3d lower=%-14.8g printed=%-14.8g upper=%-14.8g %s\n", m.k, m.lower, m.lower_printed, m.upper,
                  m.family.c_str());
    }
  }
}
