#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "ckn/battery.hpp"
#include "ckn/profile_dsl.hpp"
#include "ckn/profiles.hpp"

using namespace ckn;

namespace {

// Central differences of u and u' at a handful of radii.
void expect_consistent_derivatives(const RadialProfile& p, double tol) {
  for (double r : {0.13, 0.4, 0.77, 1.1, 1.6, 2.3}) {
    const double h = 1e-5 * std::max(1.0, r);
    const double du_fd = (p.u(r + h) - p.u(r - h)) / (2 * h);
    const double d2u_fd = (p.du(r + h) - p.du(r - h)) / (2 * h);
    const double scale = 1.0 + std::abs(p.u(r)) + std::abs(p.du(r)) + std::abs(p.d2u(r));
    EXPECT_NEAR(p.du(r), du_fd, tol * scale) << p.name << " r=" << r;
    EXPECT_NEAR(p.d2u(r), d2u_fd, tol * scale) << p.name << " r=" << r;
  }
}

}  // namespace

TEST(Profiles, FiniteDifferenceDerivativesAcrossFamilies) {
  for (const char* s : {"gauss(0.7)", "polygauss(0.5; 1,0.3,-2,0,0.5)", "hermmod(0.2,5,0.6)", "bump(1.2,1)",
                        "bump(0,2.5)", "u0(0.5)", "u0(-0.25)", "u1(0.25,-1)", "u2(3,0,-1)", "u2(2.5,0.2,0)"}) {
    expect_consistent_derivatives(make_family(s), 1e-7);
  }
}

TEST(Profiles, U1MatchesIncompleteGamma) {
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{{0, 0}, {0.25, -1}, {0.5, 1}, {-0.3, 0.2}}) {
    const RadialProfile u = make_u1(alpha, beta);
    const double k = 1 + alpha - beta / 2;
    const double p = (2 + 2 * alpha) / k;
    for (double r : {0.0, 0.3, 1.0, 2.5}) {
      const double oracle = std::pow(k, p - 1) * boost::math::tgamma(p, std::pow(r, k) / k);
      EXPECT_NEAR(u.u(r), oracle, 1e-11 * oracle) << alpha << "," << beta << " r=" << r;
    }
  }
}

TEST(Profiles, U1AtZeroZeroIsOnePlusRTimesExp) {
  const RadialProfile u = make_u1(0, 0);
  for (double r : {0.0, 0.5, 1.7, 6.0}) EXPECT_NEAR(u.u(r), (1 + r) * std::exp(-r), 1e-13);
}

TEST(Profiles, U2ClosedFormAtThreeZeroMinusOne) {
  // kappa = 2.5 and exponent -1, so u' = -r/(1 + r^2.5/2.5).
  const RadialProfile u = make_u2(3, 0, -1);
  for (double r : {0.2, 1.0, 3.0}) EXPECT_NEAR(u.du(r), -r / (1 + std::pow(r, 2.5) / 2.5), 1e-15);
  EXPECT_GT(u.u(0.0), u.u(1.0));
  EXPECT_GT(u.u(1.0), 0.0);
}

TEST(Profiles, U0IsGaussianAtAlphaZero) {
  const RadialProfile u = make_u0(0);
  for (double r : {0.0, 0.8, 2.0}) EXPECT_NEAR(u.u(r), std::exp(-r * r / 2), 1e-16);
}

TEST(Profiles, BumpHasCompactSupport) {
  const RadialProfile b = make_bump(2, 0.5);
  EXPECT_EQ(b.u(1.4), 0.0);
  EXPECT_EQ(b.u(2.6), 0.0);
  EXPECT_NEAR(b.u(2.0), std::exp(-1.0), 1e-16);
  EXPECT_THROW(make_bump(0.5, 1.0), Error);
}

TEST(Profiles, ScaledAndDilated) {
  const RadialProfile g = make_gauss(1.0);
  const RadialProfile s = scaled(g, -3.0);
  EXPECT_DOUBLE_EQ(s.u(0.5), -3.0 * g.u(0.5));
  EXPECT_DOUBLE_EQ(s.d2u(0.5), -3.0 * g.d2u(0.5));
  const RadialProfile d = dilated(g, 2.0, 4);
  EXPECT_NEAR(d.u(0.5), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(d.du(0.5), 2.0 * 2.0 * g.du(1.0), 1e-15);
}

TEST(Profiles, InvalidFamilyParameters) {
  EXPECT_THROW(make_gauss(0.0), Error);
  EXPECT_THROW(make_u0(-1.0), Error);
  EXPECT_THROW(make_u1(0, 4), Error);
  EXPECT_THROW(make_u2(2, 0, 0), Error);
  EXPECT_THROW(make_u2(3.6, 0, 0), Error);
  EXPECT_THROW(make_hermmod(0.1, -1, 1), Error);
  try {
    make_u2(2, 0, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameter);
  }
}

TEST(ProfileDsl, ParsesEveryFamily) {
  EXPECT_NEAR(make_family("gauss(0.5)").u(1.0), std::exp(-0.5), 1e-16);
  EXPECT_NEAR(make_family(" polygauss( 1 ; 1, 0, 1 ) ").u(1.0), 2 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(make_family("hermmod(0.1,2,1)").u(0.0), 0.9, 1e-15);
  EXPECT_NEAR(make_family("u0(0)").u(1.0), std::exp(-0.5), 1e-16);
  EXPECT_NEAR(make_family("u1(0,0)").u(1.0), 2 * std::exp(-1.0), 1e-13);
  EXPECT_NO_THROW(make_family("u2(3,0,-1)"));
  EXPECT_NO_THROW(make_family("bump(2,0.5)"));
}

TEST(ProfileDsl, ErrorsCarryPosition) {
  for (const char* bad : {"", "gauss", "gauss(", "gauss(1", "gauss(x)", "nope(1)", "gauss(1,2)", "gauss(1) x",
                          "polygauss(1)", "bump(1)"}) {
    try {
      make_family(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_TRUE(e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidParameter) << bad;
    }
  }
  try {
    make_family("gauss(1) x");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos);
  }
}

TEST(Validity, BalancedParametersPass) {
  const auto p = InequalityParams::balanced(3, 0, 0, 2);
  EXPECT_DOUBLE_EQ(p.gamma, 0.5);
  EXPECT_DOUBLE_EQ(p.sharp_constant(), 4.0);
  const auto v = validate_params(p);
  EXPECT_TRUE(v.basic_ok());
  EXPECT_TRUE(v.sharpness_ok());
}

TEST(Validity, NamesViolatedConditions) {
  const auto v = validate_params(InequalityParams::balanced(1, 1, 0, 2));
  EXPECT_FALSE(v.basic_ok());
  EXPECT_NE(v.failed_basic().find("n-2alpha>0"), std::string::npos);
  const auto unbalanced = validate_params({3, 0, 0, 0.3, 2});
  ASSERT_NE(unbalanced.find("balance"), nullptr);
  EXPECT_FALSE(unbalanced.find("balance")->passed);
}

TEST(Validity, SharpnessConditionsAreSeparate) {
  // t = 3, alpha = 0, beta = 0: t < 3 + alpha - beta/2 fails, the inequality itself still holds.
  const auto v = validate_params(InequalityParams::balanced(3, 0, 0, 3));
  EXPECT_TRUE(v.basic_ok());
  EXPECT_FALSE(v.sharpness_ok());
  EXPECT_FALSE(v.find("welldefine:t<3+alpha-beta/2")->passed);
}

TEST(Battery, SizesAndParse) {
  EXPECT_EQ(identity_battery().size(), 50u);
  const auto s = stability_battery();
  int hermmod = 0;
  for (const auto& p : s) {
    EXPECT_NO_THROW(make_family(p)) << p;
    if (p.rfind("hermmod", 0) == 0) ++hermmod;
  }
  EXPECT_EQ(hermmod, 30);
  for (const auto& p : identity_battery()) EXPECT_NO_THROW(make_family(p)) << p;
}
