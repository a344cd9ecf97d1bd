#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace mnlab {

// A reduced fraction recovered from a double, used for exact boundary
// comparisons in the classifier and for involutive conjugation.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Best rational approximation of v with denominator <= max_den (continued
// fractions). Returns nullopt when no fraction matches within tol.
std::optional<Rational> recover_rational(double v, std::int64_t max_den = 1'000'000,
                                         double tol = 1e-9);

// Extended real in [1, inf]; infinity is first-class because conjugates
// p' = inf and s = inf arise constantly in operator-norm kernels.
class Exponent {
 public:
  explicit Exponent(double v) : v_(v) {
    if (!(v >= 1.0)) throw std::invalid_argument("exponent must lie in [1, inf]");
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  double value() const { return v_; }
  bool is_inf() const { return std::numeric_limits<double>::infinity() == v_; }
  bool is_one() const { return v_ == 1.0; }

  // 1/v, with 1/inf = 0.
  double reciprocal() const { return is_inf() ? 0.0 : 1.0 / v_; }

  // Conjugate exponent p' with 1/p + 1/p' = 1.  Rational inputs round-trip
  // bit-exactly: conjugate(conjugate(p)) == p.
  Exponent conjugate() const;

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return a.v_ != b.v_; }
  friend bool operator<(const Exponent& a, const Exponent& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Exponent& a, const Exponent& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return a.v_ >= b.v_; }

 private:
  double v_;
};

inline Exponent conjugate_exponent(const Exponent& p) { return p.conjugate(); }

}  // namespace mnlab
