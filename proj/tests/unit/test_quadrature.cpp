#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "csrbf/errors.hpp"
#include "csrbf/quadrature.hpp"

namespace csrbf {
namespace {

TEST(Legendre, ReferenceValues) {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    const LegendreValue p0 = legendre_eval(0, x);
    EXPECT_EQ(p0.value, 1.0);
    EXPECT_EQ(p0.derivative, 0.0);
  }
  const LegendreValue p2 = legendre_eval(2, 0.0);
  EXPECT_DOUBLE_EQ(p2.value, -0.5);
  EXPECT_EQ(p2.derivative, 0.0);

  const LegendreValue p3 = legendre_eval(3, std::sqrt(3.0 / 5.0));
  EXPECT_LE(std::abs(p3.value), 1e-14);
  EXPECT_GT(std::abs(p3.derivative), 1.0);
}

TEST(Legendre, MatchesExplicitPolynomials) {
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + i * 0.05;
    const LegendreValue p4 = legendre_eval(4, x);
    EXPECT_NEAR(p4.value, (35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-14);
    EXPECT_NEAR(p4.derivative, (140 * x * x * x - 60 * x) / 8, 1e-13);
  }
  // endpoints: P_n(1) = 1, P_n'(1) = n(n+1)/2
  EXPECT_NEAR(legendre_eval(7, 1.0).derivative, 28.0, 1e-12);
  EXPECT_NEAR(legendre_eval(7, -1.0).value, -1.0, 1e-15);
}

TEST(Legendre, OutsideIntervalThrows) {
  EXPECT_THROW(legendre_eval(2, 1.0000001), std::domain_error);
  EXPECT_THROW(legendre_eval(2, -2.0), std::domain_error);
  EXPECT_THROW(legendre_eval(-1, 0.0), std::invalid_argument);
}

TEST(GaussLegendre, SmallRules) {
  const QuadratureRule two = gauss_legendre_rule(1, 2.0);
  ASSERT_EQ(two.nodes.size(), 2u);
  EXPECT_NEAR(two.nodes[0], 1.0 - 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(two.nodes[1], 1.0 + 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(two.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(two.weights[1], 1.0, 1e-15);

  const QuadratureRule one = gauss_legendre_rule(0, 1.0);
  ASSERT_EQ(one.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(one.nodes[0], 0.5);
  EXPECT_DOUBLE_EQ(one.weights[0], 1.0);

  const QuadratureRule eight = gauss_legendre_rule(7, 3.0);
  EXPECT_NEAR(std::accumulate(eight.weights.begin(), eight.weights.end(), 0.0), 3.0, 3e-12);
}

TEST(GaussLegendre, InvalidArguments) {
  EXPECT_THROW(gauss_legendre_rule(-1, 1.0), std::invalid_argument);
  EXPECT_THROW(gauss_legendre_rule(3, 0.0), std::invalid_argument);
}

TEST(GaussLegendre, StructuralInvariants) {
  for (int m : {0, 1, 2, 5, 16, 50, 99, 200, 512}) {
    const double length = 2.5;
    const QuadratureRule rule = gauss_legendre_rule(m, length);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(m + 1));
    EXPECT_EQ(rule.order, m);
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      EXPECT_GT(rule.weights[j], 0.0);
      EXPECT_GT(rule.nodes[j], 0.0);
      EXPECT_LT(rule.nodes[j], length);
      if (j > 0) EXPECT_GT(rule.nodes[j], rule.nodes[j - 1]);
      // mirror symmetry about L/2
      const std::size_t mirror = rule.nodes.size() - 1 - j;
      EXPECT_NEAR(rule.nodes[j] + rule.nodes[mirror], length, 1e-14);
      EXPECT_NEAR(rule.weights[j], rule.weights[mirror], 1e-14);
      sum += rule.weights[j];
    }
    EXPECT_LE(std::abs(sum - length) / length, 1e-12) << "m=" << m;
  }
}

TEST(GaussLegendre, MonomialExactness) {
  for (int m : {0, 1, 4, 16, 30}) {
    for (double length : {1.0, 2.0, 5.0}) {
      const QuadratureRule rule = gauss_legendre_rule(m, length);
      for (int d = 0; d <= 2 * m + 1; ++d) {
        double sum = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) sum += rule.weights[j] * std::pow(rule.nodes[j], d);
        const double exact = std::pow(length, d + 1) / (d + 1);
        EXPECT_LE(std::abs(sum - exact) / exact, 1e-10) << "m=" << m << " L=" << length << " d=" << d;
      }
    }
  }
}

TEST(GaussLegendre, DefaultOrder) {
  EXPECT_EQ(default_quadrature_order(5), 50);
  EXPECT_EQ(default_quadrature_order(25), 50);
  EXPECT_EQ(default_quadrature_order(27), 54);
}

TEST(ResidualNorm, ReferenceValues) {
  for (int m : {0, 3, 10}) {
    EXPECT_NEAR(residual_norm_sq([](double) { return 1.0; }, gauss_legendre_rule(m, 5.0)), 5.0, 1e-13);
    EXPECT_EQ(residual_norm_sq([](double) { return 0.0; }, gauss_legendre_rule(m, 5.0)), 0.0);
  }
  EXPECT_NEAR(residual_norm_sq([](double t) { return t; }, gauss_legendre_rule(3, 1.0)), 1.0 / 3.0, 1e-12);
}

TEST(ResidualNorm, NonFiniteValueNamesNode) {
  const QuadratureRule rule = gauss_legendre_rule(4, 1.0);
  const double bad = rule.nodes[2];
  try {
    residual_norm_sq([bad](double t) { return t == bad ? std::numeric_limits<double>::quiet_NaN() : t; }, rule);
    FAIL() << "expected NonFiniteValue";
  } catch (const NonFiniteValue& e) {
    EXPECT_EQ(e.where(), bad);
  }
  EXPECT_THROW(residual_norm_sq([](double) { return std::numeric_limits<double>::infinity(); }, rule),
               NonFiniteValue);
}

}  // namespace
}  // namespace csrbf
