#pragma once

// Fixed profile batteries (DSL strings) used by the CLI, tests and demos.

#include <string>
#include <vector>

#include "ckn/profile_dsl.hpp"

namespace ckn {

// 30 perturbed Gaussians plus compactly supported and exponential profiles.
// Odd Hermite degrees put a kink at the origin (u'(0) != 0), so only even
// degrees are used.
inline std::vector<std::string> stability_battery() {
  std::vector<std::string> out;
  for (const char* eps : {"0.01", "0.05", "0.2"}) {
    for (const char* i : {"2", "4", "6"}) {
      for (const char* a : {"0.3", "0.5", "1"}) out.push_back(std::string("hermmod(") + eps + "," + i + "," + a + ")");
    }
    out.push_back(std::string("hermmod(") + eps + ",4,2)");
  }
  out.push_back("bump(2,0.5)");
  out.push_back("bump(0,1)");
  out.push_back("bump(1.5,1)");
  out.push_back("u1(0,0)");
  return out;
}

// 50 smooth radial profiles with enough decay for every identity check.
inline std::vector<std::string> identity_battery() {
  return {
      "gauss(0.3)", "gauss(0.5)", "gauss(1)", "gauss(2)", "gauss(2.7)",
      "polygauss(1; 1,0,1)", "polygauss(0.5; 1,0,1)", "polygauss(0.5; 1,0,0.1)", "polygauss(1; 1,0,-0.5)",
      "polygauss(0.7; 2,0,-1,0,0.3)", "polygauss(1.5; 0,0,1)", "polygauss(0.4; 1,0,0,0,1)", "polygauss(2; 1,0,3)",
      "polygauss(0.8; -1,0,2,0,-0.2)", "polygauss(1; 0.5,0,0.5,0,0.5,0,0.5)",
      "bump(0,1)", "bump(0,0.5)", "bump(1,0.4)", "bump(2,0.7)", "bump(1.5,1)", "bump(3,2)", "bump(0.5,0.5)", "bump(4,0.3)",
      "hermmod(0.1,2,0.5)", "hermmod(0.2,4,0.5)", "hermmod(0.05,6,1)", "hermmod(0.3,2,1)", "hermmod(0.01,8,0.5)",
      "hermmod(0.2,4,0.3)", "hermmod(-0.1,2,0.7)", "hermmod(0.1,6,0.4)", "hermmod(0.5,2,2)", "hermmod(0.02,10,0.6)",
      "u0(0)", "u0(0.25)", "u0(0.5)", "u0(1)", "u0(-0.25)", "u0(2)",
      "u1(0,0)", "u1(0,-1)", "u1(0.25,0)", "u1(0.5,1)", "u1(0,-2)", "u1(0.2,0.4)", "u1(0,0.5)", "u1(1,0)",
      "hermmod(0,0,0.9)", "polygauss(0.6; 1,0,0,0,0,0,1)", "bump(0.8,0.6)",
  };
}

}  // namespace ckn
