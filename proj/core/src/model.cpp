#include "csrbf/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csrbf/errors.hpp"

namespace csrbf {
namespace {

struct State {
  double u;
  double w;
};

State rhs(const State& s, double kappa) { return {s.u * (1.0 - s.u - s.w) / kappa, s.u}; }

State axpy(const State& s, double h, const State& k) { return {s.u + h * k.u, s.w + h * k.w}; }

}  // namespace

ModelParams make_params(double kappa, double u0) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be > 0");
  if (!(u0 >= 0.0) || !std::isfinite(u0)) throw std::invalid_argument("u0 must be >= 0");
  return ModelParams{kappa, u0, std::nullopt};
}

ModelParams nondimensionalize(double a, double b, double c, double p0) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("a, b and c must all be > 0");
  }
  if (!(p0 >= 0.0)) throw std::invalid_argument("p0 must be >= 0");
  ModelParams params = make_params(c / (a * b), p0 * b / a);
  params.origin = DimensionalOrigin{a, b, c, p0};
  return params;
}

double umax_closed_form(const ModelParams& params) {
  const double kappa = params.kappa;
  const double u0 = params.u0;
  if (!(kappa > 0.0) || !(u0 > 0.0) || !(u0 < 1.0 + kappa)) {
    throw std::domain_error("closed-form u_max requires kappa > 0 and 0 < u0 < 1 + kappa");
  }
  return 1.0 + kappa * std::log(kappa / (1.0 + kappa - u0));
}

double OracleTrajectory::u_at(double t) const {
  if (times.empty()) throw std::logic_error("empty trajectory");
  if (!(t >= times.front() && t <= times.back())) {
    throw std::domain_error("time outside the oracle horizon");
  }
  auto upper = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = (upper == times.begin()) ? 0 : static_cast<std::size_t>(upper - times.begin()) - 1;
  if (i + 1 >= times.size()) return u_values.back();
  const double h = times[i + 1] - times[i];
  const double s = (t - times[i]) / h;
  const double d0 = rhs({u_values[i], w_values[i]}, kappa).u;
  const double d1 = rhs({u_values[i + 1], w_values[i + 1]}, kappa).u;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u_values[i] + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * u_values[i + 1] + (s3 - s2) * h * d1;
}

OracleTrajectory oracle_trajectory(const ModelParams& params, double horizon, double step) {
  if (!(params.kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be > 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");

  const double kappa = params.kappa;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  OracleTrajectory out;
  out.kappa = kappa;
  out.times.reserve(steps + 1);
  out.u_values.reserve(steps + 1);
  out.w_values.reserve(steps + 1);

  State y{params.u0, 0.0};
  out.times.push_back(0.0);
  out.u_values.push_back(y.u);
  out.w_values.push_back(y.w);
  for (std::size_t n = 1; n <= steps; ++n) {
    const State k1 = rhs(y, kappa);
    const State k2 = rhs(axpy(y, 0.5 * step, k1), kappa);
    const State k3 = rhs(axpy(y, 0.5 * step, k2), kappa);
    const State k4 = rhs(axpy(y, step, k3), kappa);
    y.u += step / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    y.w += step / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    if (!std::isfinite(y.u) || !std::isfinite(y.w)) {
      throw NonFiniteValue("RK4 state became non-finite at step " + std::to_string(n),
                           static_cast<double>(n) * step);
    }
    out.times.push_back(static_cast<double>(n) * step);
    out.u_values.push_back(y.u);
    out.w_values.push_back(y.w);
  }

  const auto peak = std::max_element(out.u_values.begin(), out.u_values.end());
  const auto i = static_cast<std::size_t>(peak - out.u_values.begin());
  out.peak_time = out.times[i];
  out.peak_value = *peak;
  if (i > 0 && i + 1 < out.u_values.size()) {
    const double f0 = out.u_values[i - 1];
    const double f1 = out.u_values[i];
    const double f2 = out.u_values[i + 1];
    const double curvature = f0 - 2.0 * f1 + f2;
    if (curvature < 0.0) {
      const double offset = 0.5 * (f0 - f2) / curvature;
      out.peak_time = out.times[i] + offset * step;
      out.peak_value = f1 - 0.125 * (f0 - f2) * (f0 - f2) / curvature;
    }
  }
  return out;
}

double peak_step_sensitivity(const ModelParams& params, double horizon, double step) {
  const double coarse = oracle_trajectory(params, horizon, step).peak_value;
  const double fine = oracle_trajectory(params, horizon, 0.5 * step).peak_value;
  return std::abs(coarse - fine);
}

}  // namespace csrbf
