#include "csrbf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "csrbf/errors.hpp"

namespace csrbf {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using RationalPoly = std::vector<cpp_rational>;

cpp_rational to_rational(double x) {
  if (x == 0.0) return cpp_rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer for binary64
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  cpp_int num(scaled);
  cpp_int den(1);
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return cpp_rational(num, den);
}

// Round-to-nearest conversion: form a 62..63 bit quotient, fold the remainder
// into a sticky bit, then let the hardware integer->double conversion round.
double to_double(const cpp_rational& q) {
  if (q == 0) return 0.0;
  cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  const bool negative = num < 0;
  if (negative) num = -num;
  const long long e = static_cast<long long>(boost::multiprecision::msb(num)) -
                      static_cast<long long>(boost::multiprecision::msb(den));
  const long long shift = 62 - e;
  if (shift >= 0) {
    num <<= shift;
  } else {
    den <<= -shift;
  }
  cpp_int quotient;
  cpp_int remainder;
  boost::multiprecision::divide_qr(num, den, quotient, remainder);
  auto bits = quotient.convert_to<std::uint64_t>();
  if (remainder != 0) bits |= 1u;
  const double magnitude = std::ldexp(static_cast<double>(bits), static_cast<int>(-shift));
  return negative ? -magnitude : magnitude;
}

std::vector<double> to_doubles(const RationalPoly& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(to_double(c));
  return out;
}

RationalPoly multiply(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly out(a.size() + b.size() - 1, cpp_rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

RationalPoly one_minus_r_power(int e) {
  RationalPoly out(static_cast<std::size_t>(e) + 1);
  cpp_int binom = 1;
  for (int j = 0; j <= e; ++j) {
    out[j] = (j % 2 == 0) ? cpp_rational(binom) : cpp_rational(-binom);
    binom = binom * (e - j) / (j + 1);
  }
  return out;
}

// p(1 - v) expressed in powers of v.
RationalPoly reflect(const RationalPoly& p) {
  RationalPoly out(p.size(), cpp_rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0) continue;
    const RationalPoly expansion = one_minus_r_power(static_cast<int>(k));
    for (std::size_t j = 0; j < expansion.size(); ++j) out[j] += p[k] * expansion[j];
  }
  return out;
}

// Antiderivative vanishing at zero.
RationalPoly antiderivative(const RationalPoly& p) {
  RationalPoly out(p.size() + 1, cpp_rational(0));
  for (std::size_t k = 0; k < p.size(); ++k) out[k + 1] = p[k] / cpp_rational(k + 1);
  return out;
}

RationalPoly shift_up(const RationalPoly& p) {
  RationalPoly out(p.size() + 1, cpp_rational(0));
  std::copy(p.begin(), p.end(), out.begin() + 1);
  return out;
}

cpp_rational value_at_one(const RationalPoly& p) {
  cpp_rational sum(0);
  for (const auto& c : p) sum += c;
  return sum;
}

void trim(RationalPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

RationalPoly exact_coefficients(std::span<const double> coefficients) {
  RationalPoly out;
  out.reserve(coefficients.size());
  for (double c : coefficients) out.push_back(to_rational(c));
  return out;
}

// Double-double arithmetic (value = hi + lo, |lo| <= ulp(hi) / 2).
struct Dd {
  double hi = 0.0;
  double lo = 0.0;
};

Dd two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Dd fast_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

Dd operator+(Dd a, Dd b) noexcept {
  Dd s = two_sum(a.hi, b.hi);
  const Dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = fast_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return fast_two_sum(s.hi, s.lo);
}

Dd operator-(Dd a) noexcept { return {-a.hi, -a.lo}; }
Dd operator-(Dd a, Dd b) noexcept { return a + (-b); }

Dd operator*(Dd a, Dd b) noexcept {
  const double p = a.hi * b.hi;
  const double e = std::fma(a.hi, b.hi, -p);
  return fast_two_sum(p, e + (a.hi * b.lo + a.lo * b.hi));
}

Dd operator/(Dd a, double b) noexcept {
  const double q1 = a.hi / b;
  const Dd r = a - Dd{q1, 0.0} * Dd{b, 0.0};
  const double q2 = r.hi / b;
  const Dd q = fast_two_sum(q1, q2);
  const Dd r2 = r - Dd{q2, 0.0} * Dd{b, 0.0};
  return q + Dd{r2.hi / b, 0.0};
}

Dd min(Dd a, Dd b) noexcept {
  return (a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo)) ? a : b;
}

Dd max(Dd a, Dd b) noexcept {
  return (a.hi > b.hi || (a.hi == b.hi && a.lo > b.lo)) ? a : b;
}

double horner(std::span<const double> c, double x) noexcept {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class Split>
Split split(const RationalPoly& p) {
  Split out;
  for (const auto& c : p) {
    const double hi = to_double(c);
    out.hi.push_back(hi);
    out.lo.push_back(to_double(c - to_rational(hi)));
  }
  return out;
}

template <class Split>
Dd horner(const Split& c, Dd x) noexcept {
  Dd acc;
  for (std::size_t k = c.hi.size(); k-- > 0;) acc = acc * x + Dd{c.hi[k], c.lo[k]};
  return acc;
}

double rounded(Dd x) noexcept { return x.hi + x.lo; }

RadialProfile from_exact(RationalPoly p) {
  trim(p);
  return RadialProfile(to_doubles(p));
}

RadialProfile factored(int exponent, const std::vector<cpp_int>& bracket) {
  cpp_int g = 0;
  for (const auto& c : bracket) g = boost::multiprecision::gcd(g, c);
  RationalPoly q;
  for (const auto& c : bracket) q.emplace_back(c / g);
  return from_exact(multiply(one_minus_r_power(exponent), q));
}

void check_segment(double a, double b) {
  if (!(a >= 0.0 && a <= b && b <= 1.0)) {
    throw std::domain_error("segment bounds must satisfy 0 <= a <= b <= 1");
  }
}

}  // namespace

RadialProfile::RadialProfile(std::vector<double> coefficients)
    : monomial_(std::move(coefficients)) {
  if (monomial_.empty()) throw std::invalid_argument("profile needs at least one coefficient");
  for (double c : monomial_) {
    if (!std::isfinite(c)) throw std::invalid_argument("profile coefficients must be finite");
  }
  const RationalPoly p = exact_coefficients(monomial_);
  const RationalPoly edge = reflect(p);
  const RationalPoly head0 = antiderivative(p);
  const RationalPoly head1 = antiderivative(shift_up(p));

  // \int_{1-v}^1 p(s) ds = \int_0^v p(1-w) dw
  const RationalPoly tail0 = antiderivative(edge);
  // \int_{1-v}^1 s p(s) ds = \int_0^v (1-w) p(1-w) dw
  RationalPoly weighted = edge;
  weighted.push_back(cpp_rational(0));
  for (std::size_t k = 0; k + 1 < weighted.size(); ++k) weighted[k + 1] -= edge[k];
  const RationalPoly tail1 = antiderivative(weighted);

  edge_ = to_doubles(edge);
  head0_ = split<SplitPoly>(head0);
  head1_ = split<SplitPoly>(head1);
  tail0_ = split<SplitPoly>(tail0);
  tail1_ = split<SplitPoly>(tail1);
}

double RadialProfile::operator()(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("radial argument must be >= 0");
  if (r >= 1.0) return 0.0;
  if (r < 0.5) return horner(monomial_, r);
  return horner(edge_, 1.0 - r);
}

double RadialProfile::polynomial(double r) const noexcept { return horner(monomial_, r); }

namespace {

// \int_a^b of the integrand whose head/tail antiderivatives are given.
template <class Split>
Dd segment(const Split& head, const Split& tail, Dd a, Dd b) noexcept {
  if (a.hi + b.hi <= 1.0) return horner(head, b) - horner(head, a);
  const Dd one{1.0, 0.0};
  return horner(tail, one - a) - horner(tail, one - b);
}

}  // namespace

double RadialProfile::segment_integral(double a, double b) const {
  check_segment(a, b);
  return rounded(segment(head0_, tail0_, Dd{a, 0.0}, Dd{b, 0.0}));
}

double RadialProfile::segment_moment(double a, double b) const {
  check_segment(a, b);
  return rounded(segment(head1_, tail1_, Dd{a, 0.0}, Dd{b, 0.0}));
}

RadialProfile truncated_power(int l) {
  if (l < 0) throw std::invalid_argument("truncated power exponent must be >= 0");
  return from_exact(one_minus_r_power(l));
}

RadialProfile wendland_profile(int s, int k) {
  if (s < 1) throw UnsupportedKernel("unsupported kernel: dimension s must be >= 1");
  const int half = s / 2;
  // l = floor(s/2) + k + 1
  const cpp_int l = half + k + 1;
  switch (k) {
    case 0:
      return truncated_power(half + 1);
    case 1:
      return factored(half + 3, {1, l + 1});
    case 2:
      return factored(half + 5, {3, 3 * l + 6, l * l + 4 * l + 3});
    case 3:
      return factored(half + 7, {15, 15 * l + 45, 6 * l * l + 36 * l + 45,
                                 l * l * l + 9 * l * l + 23 * l + 15});
    default:
      break;
  }
  if (s == 3 && k == 4) return factored(10, {5, 50, 210, 450, 429});
  if (s == 3 && k == 5) return factored(12, {9, 108, 566, 1644, 2697, 2048});
  throw UnsupportedKernel("unsupported kernel: (s=" + std::to_string(s) +
                          ", k=" + std::to_string(k) + ")");
}

RadialProfile apply_operator_I(const RadialProfile& f) {
  const RationalPoly antider = antiderivative(shift_up(exact_coefficients(f.coefficients())));
  const cpp_rational at_one = value_at_one(antider);
  RationalPoly out(antider.size(), cpp_rational(0));
  for (std::size_t j = 0; j < antider.size(); ++j) out[j] = -antider[j];
  out[0] += at_one;
  return from_exact(std::move(out));
}

ScaledKernel::ScaledKernel(std::shared_ptr<const RadialProfile> p, double c, double r_omega)
    : profile(std::move(p)), center(c), support_radius(r_omega) {
  if (!profile) throw std::invalid_argument("scaled kernel needs a profile");
  if (!(r_omega > 0.0) || !std::isfinite(r_omega)) {
    throw std::invalid_argument("support radius must be positive and finite");
  }
  if (!std::isfinite(c)) throw std::invalid_argument("kernel center must be finite");
}

double evaluate(const ScaledKernel& kernel, double t) {
  if (!std::isfinite(t)) throw std::domain_error("kernel argument must be finite");
  const double r = std::abs(t - kernel.center) / kernel.support_radius;
  return (*kernel.profile)(r);
}

KernelIntegrals integrals(const ScaledKernel& kernel, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("integration limit must be finite and >= 0");
  }
  const RadialProfile& p = *kernel.profile;
  const double c = kernel.center;
  const double radius = kernel.support_radius;
  const Dd zero{0.0, 0.0};
  const Dd one{1.0, 0.0};
  const Dd r_radius{radius, 0.0};
  // t - c and c are exact; the radial coordinates carry double-double error only
  const Dd t_minus_c = two_sum(t, -c);
  const Dd t_r = t_minus_c / radius;    // signed radial position of t
  const Dd origin_r = Dd{-c, 0.0} / radius;  // signed radial position of x = 0

  Dd once, twice;
  const auto accumulate = [&](Dd a, Dd b, double side) {
    if (!(a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo))) return;
    const Dd m0 = r_radius * segment(p.head0_, p.tail0_, a, b);
    const Dd m1 = r_radius * r_radius * segment(p.head1_, p.tail1_, a, b);
    once = once + m0;
    // (t - x) = (t - c) - side * radius * s
    twice = twice + t_minus_c * m0 - Dd{side, 0.0} * m1;
  };
  // left of the centre, x = c - radius * s: s from max(0, -t_r) to min(1, c / radius)
  accumulate(max(zero, -t_r), min(one, -origin_r), -1.0);
  // right of the centre, x = c + radius * s: s from max(0, origin_r) to min(1, t_r)
  accumulate(max(zero, origin_r), min(one, t_r), 1.0);
  return {rounded(once), rounded(twice)};
}

double integrate(const ScaledKernel& kernel, double t) { return integrals(kernel, t).once; }

double double_integrate(const ScaledKernel& kernel, double t) {
  return integrals(kernel, t).twice;
}

}  // namespace csrbf
