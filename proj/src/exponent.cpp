#include "mnlab/exponent.hpp"

#include <cmath>
#include <cstdlib>

namespace mnlab {

std::optional<Rational> recover_rational(double v, std::int64_t max_den, double tol) {
  if (!std::isfinite(v)) return std::nullopt;
  const double scale = std::max(1.0, std::fabs(v));
  double sign = v < 0 ? -1.0 : 1.0;
  double x = std::fabs(v);

  // continued-fraction convergents p/q of x
  std::int64_t p0 = 1, q0 = 0, p1 = static_cast<std::int64_t>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::fabs(approx - x) <= tol * scale) {
      return Rational{static_cast<std::int64_t>(sign) * p1, q1};
    }
    if (frac == 0.0) break;
    double inv = 1.0 / frac;
    double a = std::floor(inv);
    if (a > 9e18) break;
    std::int64_t ai = static_cast<std::int64_t>(a);
    std::int64_t p2 = ai * p1 + p0;
    std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den || p2 < 0 || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    frac = inv - a;
  }
  double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (q1 <= max_den && std::fabs(approx - x) <= tol * scale) {
    return Rational{static_cast<std::int64_t>(sign) * p1, q1};
  }
  return std::nullopt;
}

Exponent Exponent::conjugate() const {
  if (is_one()) return Exponent::infinity();
  if (is_inf()) return Exponent(1.0);
  if (v_ == 2.0) return Exponent(2.0);
  if (auto r = recover_rational(v_)) {
    // p = n/d  =>  p' = n/(n-d); exact in the fraction, so the double result
    // is stable under a second conjugation.
    const std::int64_t n = r->num, d = r->den;
    if (n > d) return Exponent(static_cast<double>(n) / static_cast<double>(n - d));
  }
  return Exponent(v_ / (v_ - 1.0));
}

}  // namespace mnlab
