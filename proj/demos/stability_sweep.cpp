// Deficit against distance to the Gaussians as a Hermite perturbation grows; CSV on stdout.
#include <cstdio>
#include <string>

#include "ckn/ckn.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::stoi(argv[1]) : 3;
  std::printf("eps,degree,delta,dist_grad,dist_l2,ratio_grad,ratio_l2\n");
  for (int i : {2, 4, 6}) {
    for (double eps = 0.01; eps < 1.0; eps *= 1.6) {
      const auto u = ckn::make_hermmod(eps, i, 0.5);
      const auto g = ckn::stability_report_gradient(u, n);
      const auto l = ckn::stability_report_l2(u, n);
      std::printf("%.6g,%d,%.10g,%.10g,%.10g,%.6g,%.6g\n", eps, i, g.delta, g.relative_distance, l.relative_distance,
                  g.delta / (g.theorem_coefficient * g.relative_distance),
                  l.delta / (l.theorem_coefficient * l.relative_distance));
    }
  }
}
