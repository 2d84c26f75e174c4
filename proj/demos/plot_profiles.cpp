// Samples profiles given as DSL strings on [0, rmax]; CSV for plotting.
#include <cstdio>
#include <string>
#include <vector>

#include "ckn/ckn.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> specs(argv + 1, argv + argc);
  if (specs.empty()) specs = {"u0(0)", "u1(0,0)", "u2(3,0,-1)", "bump(2,0.5)", "hermmod(0.2,4,0.5)"};
  std::printf("profile,r,u,du,d2u\n");
  for (const auto& s : specs) {
    ckn::RadialProfile p;
    try {
      p = ckn::make_family(s);
    } catch (const ckn::Error& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return 2;
    }
    for (int i = 0; i <= 200; ++i) {
      const double r = 6.0 * i / 200;
      std::printf("\"%s\",%.6g,%.12g,%.12g,%.12g\n", s.c_str(), r, p.u(r), p.du(r), p.d2u(r));
    }
  }
}
