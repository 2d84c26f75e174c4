#pragma once

// Probabilists' Hermite polynomials He_i by forward recurrence.

#include <cmath>
#include <vector>

#include "ckn/error.hpp"

namespace ckn {

enum class HermiteConvention {
  ProbabilistUnnormalized,  // H_0 = 1, H_1 = t, H_{i+1} = t H_i - i H_{i-1}; norm^2 = i!
  ProbabilistNormalized,    // H_i / sqrt(i!)
};

inline double factorial(int i) {
  double f = 1.0;
  for (int j = 2; j <= i; ++j) f *= j;
  return f;
}

// Values H_0(t), ..., H_imax(t) (unnormalized).
inline std::vector<double> hermite_values(int imax, double t) {
  require(imax >= 0, ErrorKind::InvalidParameter, "Hermite degree must be >= 0");
  std::vector<double> h(static_cast<std::size_t>(imax) + 1);
  h[0] = 1.0;
  if (imax >= 1) h[1] = t;
  for (int i = 1; i < imax; ++i) h[i + 1] = t * h[i] - i * h[i - 1];
  return h;
}

inline double hermite_eval(int i, double t,
                           HermiteConvention conv = HermiteConvention::ProbabilistUnnormalized) {
  const double v = hermite_values(i, t).back();
  return conv == HermiteConvention::ProbabilistNormalized ? v / std::sqrt(factorial(i)) : v;
}

// d/dt H_i = i H_{i-1}
inline double hermite_deriv(int i, double t,
                            HermiteConvention conv = HermiteConvention::ProbabilistUnnormalized) {
  if (i == 0) return 0.0;
  const double v = i * hermite_values(i - 1, t).back();
  return conv == HermiteConvention::ProbabilistNormalized ? v / std::sqrt(factorial(i)) : v;
}

// d^2/dt^2 H_i = i (i - 1) H_{i-2}
inline double hermite_deriv2(int i, double t,
                             HermiteConvention conv = HermiteConvention::ProbabilistUnnormalized) {
  if (i < 2) return 0.0;
  const double v = static_cast<double>(i) * (i - 1) * hermite_values(i - 2, t).back();
  return conv == HermiteConvention::ProbabilistNormalized ? v / std::sqrt(factorial(i)) : v;
}

}  // namespace ckn
