#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "csrbf/kernel.hpp"
#include "csrbf/model.hpp"

namespace csrbf {

struct KernelSpec {
  int s = 3;
  int k = 5;
};

struct CollocationConfig {
  int n = 18;              // basis size and node count
  double length = 5.0;     // L, last collocation node
  double rho = 1.0;        // node clustering exponent
  double r_omega = 1.0;    // support radius
  KernelSpec kernel{};
  double newton_tol = 1e-12;
  int newton_max_iters = 100;
  int max_halvings = 30;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// L = 5 for kappa >= 0.1, otherwise 2.
double default_length(double kappa);

/// t_j = L (j / N)^rho for j = 1..N.
std::vector<double> generate_nodes(int n, double length, double rho);

/// A[j][i] = phi(|x_j - x_i| / r_omega).
Eigen::MatrixXd interpolation_matrix(std::span<const double> nodes, const RadialProfile& profile,
                                     double r_omega);

/// Solves A xi = y with a Cholesky factorization. Throws SingularSystem if A is
/// not positive definite or its condition estimate exceeds 1e14.
Eigen::VectorXd interpolate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

/// Nodes, the shared kernels centred on them, and the three collocation matrices.
struct BasisSystem {
  std::vector<double> nodes;
  std::vector<ScaledKernel> kernels;
  Eigen::MatrixXd phi;    // phi_i(t_j)
  Eigen::MatrixXd iphi;   // \int_0^{t_j} phi_i
  Eigen::MatrixXd i2phi;  // \int_0^{t_j} \int_0^tau phi_i

  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

BasisSystem assemble_basis(const CollocationConfig& config);

/// R_j = kappa u'(t_j) - u(t_j) (1 - u(t_j) - \int_0^{t_j} u).
Eigen::VectorXd residual_vector(const Eigen::VectorXd& xi, const BasisSystem& basis,
                                const ModelParams& params);

/// dR/dxi, exact: the residual is quadratic in xi.
Eigen::MatrixXd jacobian(const Eigen::VectorXd& xi, const BasisSystem& basis,
                         const ModelParams& params);

class SolutionExpansion {
 public:
  SolutionExpansion(Eigen::VectorXd xi, CollocationConfig config,
                    std::shared_ptr<const BasisSystem> basis, ModelParams params,
                    bool converged, int iterations, double final_residual);

  const Eigen::VectorXd& xi() const noexcept { return xi_; }
  const CollocationConfig& config() const noexcept { return config_; }
  const BasisSystem& basis() const noexcept { return *basis_; }
  const ModelParams& params() const noexcept { return params_; }
  bool converged() const noexcept { return converged_; }
  int newton_iterations() const noexcept { return iterations_; }
  double final_residual_inf_norm() const noexcept { return final_residual_; }

 private:
  Eigen::VectorXd xi_;
  CollocationConfig config_;
  std::shared_ptr<const BasisSystem> basis_;
  ModelParams params_;
  bool converged_;
  int iterations_;
  double final_residual_;
};

/// Called with every Newton iterate before its step is computed.
using NewtonObserver =
    std::function<void(const Eigen::VectorXd& xi, const BasisSystem& basis, int iteration)>;

/// Damped Newton from xi = 0 on R(xi) = 0. Non-convergence is reported in the
/// result; a singular Jacobian throws SingularSystem.
SolutionExpansion newton_solve(const CollocationConfig& config, const ModelParams& params,
                               const NewtonObserver& observer = {});

struct SolutionSample {
  double u = 0.0;
  double u_prime = 0.0;
  double cumulative = 0.0;  // \int_0^t u
};

SolutionSample evaluate_solution(const SolutionExpansion& solution, double t);

/// kappa u'(t) - u(t) (1 - u(t) - \int_0^t u) off the nodes.
double equation_residual(const SolutionExpansion& solution, double t);

/// ||R||^2 over [0, L] with an (m+1)-point Gauss-Legendre rule; m <= 0 picks max(50, 2N).
double solution_residual_norm_sq(const SolutionExpansion& solution, int m = 0);

struct Peak {
  double t_star = 0.0;
  double u_max = 0.0;
};

/// Grid search over [0, L] then golden-section refinement. Throws
/// PeakNotCaptured when the grid maximum sits on the boundary.
Peak solution_umax(const SolutionExpansion& solution, int grid_size = 2000);

}  // namespace csrbf
