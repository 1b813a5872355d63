#include "csrbf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "csrbf/errors.hpp"

namespace csrbf {

LegendreValue legendre_eval(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("Legendre degree must be >= 0");
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("Legendre argument must lie in [-1, 1]");
  if (degree == 0) return {1.0, 0.0};

  double previous = 1.0;
  double current = x;
  for (int n = 2; n <= degree; ++n) {
    const double next = ((2.0 * n - 1.0) * x * current - (n - 1.0) * previous) / n;
    previous = current;
    current = next;
  }
  const double n = degree;
  if (std::abs(x) == 1.0) {
    // P_n'(+-1) = (+-1)^(n-1) n (n+1) / 2
    const double sign = (x < 0.0 && degree % 2 == 0) ? -1.0 : 1.0;
    return {current, sign * n * (n + 1.0) / 2.0};
  }
  return {current, n * (x * current - previous) / (x * x - 1.0)};
}

QuadratureRule gauss_legendre_rule(int m, double length) {
  if (m < 0) throw std::invalid_argument("quadrature order m must be >= 0");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("interval length must be positive and finite");
  }
  constexpr int max_iterations = 100;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const int points = m + 1;

  std::vector<double> roots(points);
  std::vector<double> derivs(points);
  // Roots are symmetric; solve for the non-negative half and mirror.
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    LegendreValue pv = legendre_eval(points, x);
    bool done = false;
    for (int it = 0; it < max_iterations; ++it) {
      const double dx = pv.value / pv.derivative;
      x -= dx;
      pv = legendre_eval(points, x);
      if (std::abs(pv.value) <= 1e-14 || std::abs(dx) <= 2.0 * eps) {
        done = true;
        break;
      }
    }
    if (!done) {
      throw ConvergenceFailure("Legendre root " + std::to_string(i) + " of P_" +
                               std::to_string(points) + " did not converge");
    }
    if (points % 2 == 1 && i == points / 2) {
      x = 0.0;
      pv = legendre_eval(points, x);
    }
    roots[i] = x;
    derivs[i] = pv.derivative;
    roots[points - 1 - i] = -x;
    derivs[points - 1 - i] = pv.derivative;
  }

  QuadratureRule rule;
  rule.order = m;
  rule.interval_length = length;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  // roots[] is descending; emit ascending nodes
  for (int j = 0; j < points; ++j) {
    const double s = roots[points - 1 - j];
    const double dp = derivs[points - 1 - j];
    rule.nodes[j] = 0.5 * length * s + 0.5 * length;
    rule.weights[j] = length / ((1.0 - s * s) * dp * dp);
  }
  return rule;
}

int default_quadrature_order(int basis_size) { return std::max(50, 2 * basis_size); }

double residual_norm_sq(const std::function<double(double)>& residual, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double r = residual(rule.nodes[j]);
    if (!std::isfinite(r)) {
      throw NonFiniteValue("residual is not finite at t = " + std::to_string(rule.nodes[j]),
                           rule.nodes[j]);
    }
    sum += rule.weights[j] * r * r;
  }
  return sum;
}

}  // namespace csrbf
