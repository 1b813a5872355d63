#include "csrbf/collocation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "csrbf/errors.hpp"
#include "csrbf/quadrature.hpp"

namespace csrbf {
namespace {

void check_size(const Eigen::VectorXd& xi, const BasisSystem& basis) {
  if (xi.size() != basis.size()) {
    throw std::invalid_argument("coefficient vector has length " + std::to_string(xi.size()) +
                                ", basis has " + std::to_string(basis.size()));
  }
}

struct NodeState {
  Eigen::VectorXd u;           // u(t_j)
  Eigen::VectorXd logistic;    // 1 - u - \int u at t_j
};

NodeState node_state(const Eigen::VectorXd& xi, const BasisSystem& basis,
                     const ModelParams& params) {
  const Eigen::Map<const Eigen::VectorXd> t(basis.nodes.data(), basis.size());
  NodeState s;
  s.u = (basis.iphi * xi).array() + params.u0;
  const Eigen::VectorXd cumulative = basis.i2phi * xi + params.u0 * t;
  s.logistic = (1.0 - s.u.array() - cumulative.array()).matrix();
  return s;
}

}  // namespace

void CollocationConfig::validate() const {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("L must be > 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be > 0");
  if (!(r_omega > 0.0) || !std::isfinite(r_omega)) {
    throw std::invalid_argument("r_omega must be > 0");
  }
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton tolerance must be > 0");
  if (newton_max_iters < 0) throw std::invalid_argument("newton iteration cap must be >= 0");
  if (max_halvings < 0) throw std::invalid_argument("halving cap must be >= 0");
}

double default_length(double kappa) { return kappa >= 0.1 ? 5.0 : 2.0; }

std::vector<double> generate_nodes(int n, double length, double rho) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  if (!(length > 0.0)) throw std::invalid_argument("L must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    nodes[j - 1] = length * std::pow(static_cast<double>(j) / n, rho);
  }
  return nodes;
}

Eigen::MatrixXd interpolation_matrix(std::span<const double> nodes, const RadialProfile& profile,
                                     double r_omega) {
  if (!(r_omega > 0.0)) throw std::invalid_argument("r_omega must be > 0");
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      a(j, i) = profile(std::abs(nodes[j] - nodes[i]) / r_omega);
    }
  }
  return a;
}

Eigen::VectorXd interpolate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  if (a.rows() != a.cols() || a.rows() != y.size()) {
    throw std::invalid_argument("interpolation system dimensions do not match");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem("interpolation matrix is not positive definite");
  }
  const double rcond = llt.rcond();
  if (!(rcond * 1e14 >= 1.0)) {
    throw SingularSystem("interpolation matrix is ill-conditioned (condition estimate " +
                         std::to_string(1.0 / rcond) + ")");
  }
  return llt.solve(y);
}

BasisSystem assemble_basis(const CollocationConfig& config) {
  config.validate();
  auto profile = std::make_shared<const RadialProfile>(
      wendland_profile(config.kernel.s, config.kernel.k));

  BasisSystem basis;
  basis.nodes = generate_nodes(config.n, config.length, config.rho);
  basis.kernels.reserve(basis.nodes.size());
  for (double center : basis.nodes) basis.kernels.emplace_back(profile, center, config.r_omega);

  const int n = config.n;
  basis.phi.resize(n, n);
  basis.iphi.resize(n, n);
  basis.i2phi.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double t = basis.nodes[j];
    for (int i = 0; i < n; ++i) {
      const ScaledKernel& kernel = basis.kernels[i];
      const KernelIntegrals ints = integrals(kernel, t);
      basis.phi(j, i) = evaluate(kernel, t);
      basis.iphi(j, i) = ints.once;
      basis.i2phi(j, i) = ints.twice;
    }
  }
  return basis;
}

Eigen::VectorXd residual_vector(const Eigen::VectorXd& xi, const BasisSystem& basis,
                                const ModelParams& params) {
  check_size(xi, basis);
  const NodeState s = node_state(xi, basis, params);
  return params.kappa * (basis.phi * xi) - s.u.cwiseProduct(s.logistic);
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& xi, const BasisSystem& basis,
                         const ModelParams& params) {
  check_size(xi, basis);
  const NodeState s = node_state(xi, basis, params);
  return params.kappa * basis.phi - s.logistic.asDiagonal() * basis.iphi +
         s.u.asDiagonal() * (basis.iphi + basis.i2phi);
}

SolutionExpansion::SolutionExpansion(Eigen::VectorXd xi, CollocationConfig config,
                                     std::shared_ptr<const BasisSystem> basis, ModelParams params,
                                     bool converged, int iterations, double final_residual)
    : xi_(std::move(xi)),
      config_(std::move(config)),
      basis_(std::move(basis)),
      params_(std::move(params)),
      converged_(converged),
      iterations_(iterations),
      final_residual_(final_residual) {
  if (!basis_) throw std::invalid_argument("solution needs a basis");
  check_size(xi_, *basis_);
}

SolutionExpansion newton_solve(const CollocationConfig& config, const ModelParams& params,
                               const NewtonObserver& observer) {
  auto basis = std::make_shared<const BasisSystem>(assemble_basis(config));
  const int n = basis->size();

  Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = residual_vector(xi, *basis, params);
  double inf_norm = r.lpNorm<Eigen::Infinity>();
  int iterations = 0;
  bool converged = inf_norm <= config.newton_tol;

  while (!converged && iterations < config.newton_max_iters) {
    if (observer) observer(xi, *basis, iterations);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jacobian(xi, *basis, params));
    const double rcond = lu.rcond();
    if (!(rcond > std::numeric_limits<double>::epsilon())) {
      throw SingularSystem("Newton Jacobian is singular at iteration " +
                           std::to_string(iterations));
    }
    const Eigen::VectorXd step = lu.solve(-r);

    const double norm0 = r.norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= config.max_halvings; ++h, lambda *= 0.5) {
      Eigen::VectorXd trial = xi + lambda * step;
      Eigen::VectorXd trial_r = residual_vector(trial, *basis, params);
      if (trial_r.norm() < norm0) {
        xi = std::move(trial);
        r = std::move(trial_r);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stagnated
    ++iterations;
    inf_norm = r.lpNorm<Eigen::Infinity>();
    converged = inf_norm <= config.newton_tol;
  }
  return SolutionExpansion(std::move(xi), config, std::move(basis), params, converged, iterations,
                           inf_norm);
}

SolutionSample evaluate_solution(const SolutionExpansion& solution, double t) {
  if (!std::isfinite(t) || t < 0.0) throw std::domain_error("t must be finite and >= 0");
  const BasisSystem& basis = solution.basis();
  const Eigen::VectorXd& xi = solution.xi();
  SolutionSample out;
  for (int i = 0; i < basis.size(); ++i) {
    const ScaledKernel& kernel = basis.kernels[i];
    const KernelIntegrals ints = integrals(kernel, t);
    out.u_prime += xi[i] * evaluate(kernel, t);
    out.u += xi[i] * ints.once;
    out.cumulative += xi[i] * ints.twice;
  }
  const double u0 = solution.params().u0;
  out.u += u0;
  out.cumulative += u0 * t;
  return out;
}

double equation_residual(const SolutionExpansion& solution, double t) {
  const SolutionSample s = evaluate_solution(solution, t);
  return solution.params().kappa * s.u_prime - s.u * (1.0 - s.u - s.cumulative);
}

double solution_residual_norm_sq(const SolutionExpansion& solution, int m) {
  const CollocationConfig& config = solution.config();
  if (m <= 0) m = default_quadrature_order(config.n);
  const QuadratureRule rule = gauss_legendre_rule(m, config.length);
  return residual_norm_sq([&](double t) { return equation_residual(solution, t); }, rule);
}

Peak solution_umax(const SolutionExpansion& solution, int grid_size) {
  if (grid_size < 3) throw std::invalid_argument("search grid needs at least 3 points");
  const double length = solution.config().length;
  const auto u_of = [&](double t) { return evaluate_solution(solution, t).u; };
  const auto grid_t = [&](int i) { return length * static_cast<double>(i) / (grid_size - 1); };

  int best = 0;
  double best_u = u_of(0.0);
  for (int i = 1; i < grid_size; ++i) {
    const double u = u_of(grid_t(i));
    if (u > best_u) {
      best_u = u;
      best = i;
    }
  }
  if (best == 0 || best == grid_size - 1) {
    throw PeakNotCaptured("maximum of u lies on the boundary of [0, L]; increase L (L = " +
                          std::to_string(length) + ")");
  }

  // golden-section maximisation on the bracketing grid cells
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid_t(best - 1);
  double b = grid_t(best + 1);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = u_of(c);
  double fd = u_of(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = u_of(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = u_of(d);
    }
  }
  const double t_star = 0.5 * (a + b);
  Peak peak{t_star, u_of(t_star)};
  if (best_u > peak.u_max) peak = Peak{grid_t(best), best_u};
  return peak;
}

}  // namespace csrbf
