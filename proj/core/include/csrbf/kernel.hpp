#pragma once

#include <memory>
#include <span>
#include <vector>

namespace csrbf {

struct ScaledKernel;
struct KernelIntegrals;

/// A compactly supported radial profile: a single polynomial on [0, 1],
/// identically zero for r >= 1.
///
/// Coefficients are held in ascending powers of r. On construction the
/// polynomial is also re-expanded in v = 1 - r and its zeroth and first
/// moment antiderivatives are formed, all in exact rational arithmetic. The
/// antiderivatives are kept as unevaluated double pairs and evaluated in
/// double-double, since differences of antiderivatives over short segments
/// cancel heavily. Evaluation and segment integrals use the r-basis near the
/// centre of the support and the v-basis near its edge, where the profile has
/// a high-order zero.
class RadialProfile {
 public:
  explicit RadialProfile(std::vector<double> coefficients);

  std::span<const double> coefficients() const noexcept { return monomial_; }
  int degree() const noexcept { return static_cast<int>(monomial_.size()) - 1; }

  /// Profile value; r must be >= 0.
  double operator()(double r) const;

  /// Horner evaluation of the stored monomial form, without the support cut.
  double polynomial(double r) const noexcept;

  /// \int_a^b p(s) ds for 0 <= a <= b <= 1.
  double segment_integral(double a, double b) const;
  /// \int_a^b s p(s) ds for 0 <= a <= b <= 1.
  double segment_moment(double a, double b) const;

 private:
  friend KernelIntegrals integrals(const ScaledKernel& kernel, double t);

  // coefficient c_k = hi[k] + lo[k]
  struct SplitPoly {
    std::vector<double> hi, lo;
  };

  std::vector<double> monomial_;  // p(r)
  std::vector<double> edge_;      // p(1 - v) in powers of v
  SplitPoly head0_, head1_;       // \int_0^r p, \int_0^r s p in powers of r
  SplitPoly tail0_, tail1_;       // \int_{1-v}^1 p, \int_{1-v}^1 s p in powers of v
};

/// Wendland's phi_{s,k}, with the free positive constant chosen so the
/// coefficients are the smallest integers (Table-style printed form).
/// Supports k <= 3 for every s >= 1 and k in {4, 5} for s = 3.
RadialProfile wendland_profile(int s, int k);

/// (I f)(r) = \int_r^1 t f(t) dt, computed by exact antidifferentiation.
RadialProfile apply_operator_I(const RadialProfile& f);

/// Truncated power (1 - r)^l_+.
RadialProfile truncated_power(int l);

/// A profile centred at a node and scaled to a support radius, in time units.
struct ScaledKernel {
  std::shared_ptr<const RadialProfile> profile;
  double center = 0.0;
  double support_radius = 1.0;

  ScaledKernel(std::shared_ptr<const RadialProfile> p, double c, double r_omega);
};

/// phi(|t - center| / r_omega).
double evaluate(const ScaledKernel& kernel, double t);

/// \int_0^t phi(|x - center| / r_omega) dx, t >= 0.
double integrate(const ScaledKernel& kernel, double t);

/// \int_0^t \int_0^tau phi dx dtau = \int_0^t (t - x) phi dx, t >= 0.
double double_integrate(const ScaledKernel& kernel, double t);

struct KernelIntegrals {
  double once = 0.0;
  double twice = 0.0;
};

/// Both integrals in one pass over the support pieces.
KernelIntegrals integrals(const ScaledKernel& kernel, double t);

}  // namespace csrbf
