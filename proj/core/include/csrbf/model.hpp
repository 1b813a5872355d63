#pragma once

#include <optional>
#include <vector>

namespace csrbf {

/// Coefficients of the dimensional model p' = a p - b p^2 - c p \int_0^t p.
struct DimensionalOrigin {
  double a = 0.0;   // birth rate
  double b = 0.0;   // crowding
  double c = 0.0;   // toxicity
  double p0 = 0.0;  // initial population
};

/// Nondimensional problem kappa u' = u - u^2 - u \int_0^t u, u(0) = u0.
struct ModelParams {
  double kappa = 1.0;
  double u0 = 0.0;
  std::optional<DimensionalOrigin> origin;
};

/// Validating constructor: kappa > 0, u0 >= 0.
ModelParams make_params(double kappa, double u0);

/// kappa = c / (a b), u0 = p0 b / a.
ModelParams nondimensionalize(double a, double b, double c, double p0);

/// Peak of u from the phase-plane reduction kappa du/dw = 1 - u - w:
/// 1 + kappa ln(kappa / (1 + kappa - u0)). Requires 0 < u0 < 1 + kappa.
double umax_closed_form(const ModelParams& params);

struct OracleTrajectory {
  std::vector<double> times;
  std::vector<double> u_values;
  std::vector<double> w_values;  // \int_0^t u
  double kappa = 1.0;
  double peak_time = 0.0;
  double peak_value = 0.0;

  /// Cubic Hermite interpolation of u using the ODE right-hand side as slope.
  double u_at(double t) const;
};

/// Classical RK4 on {kappa u' = u (1 - u - w), w' = u} from (u0, 0) with a fixed step.
/// The peak is refined by the vertex of the parabola through the bracketing samples.
OracleTrajectory oracle_trajectory(const ModelParams& params, double horizon = 10.0,
                                   double step = 1e-4);

/// |peak(h) - peak(h/2)|.
double peak_step_sensitivity(const ModelParams& params, double horizon = 10.0,
                             double step = 1e-4);

}  // namespace csrbf
