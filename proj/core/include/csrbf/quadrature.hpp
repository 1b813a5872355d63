#pragma once

#include <functional>
#include <vector>

namespace csrbf {

struct LegendreValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// P_n(x) and P_n'(x) by the three-term recurrence; |x| <= 1.
LegendreValue legendre_eval(int degree, double x);

/// (m+1)-point Gauss-Legendre rule mapped from [-1, 1] onto [0, L].
struct QuadratureRule {
  std::vector<double> nodes;    // ascending, inside (0, L)
  std::vector<double> weights;  // positive, sum to L
  int order = 0;                // m
  double interval_length = 0.0; // L
};

QuadratureRule gauss_legendre_rule(int m, double length);

/// Default diagnostic order for an N-term expansion: max(50, 2N).
int default_quadrature_order(int basis_size);

/// Sum_j w_j R(t_j)^2. Throws NonFiniteValue carrying the node if R is not finite there.
double residual_norm_sq(const std::function<double(double)>& residual, const QuadratureRule& rule);

}  // namespace csrbf
