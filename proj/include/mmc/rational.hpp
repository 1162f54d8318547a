#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace mmc {

/// Exact rational number backed by GMP.
///
/// Always canonical: the denominator is positive and coprime to the
/// numerator, so equality of values is equality of representations.
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral T>
  Rational(T v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)

  template <std::unsigned_integral T>
  Rational(T v) : v_(static_cast<unsigned long>(v)) {}  // NOLINT(google-explicit-constructor)

  /// Throws std::domain_error on a zero denominator.
  Rational(long num, long den);

  explicit Rational(mpq_class v);

  const mpq_class& mpq() const noexcept { return v_; }
  mpq_class& mpq() noexcept { return v_; }

  int sign() const noexcept { return sgn(v_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const;

  /// Nearest double, for display only.
  double approx() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

Rational abs(const Rational& r);

/// Parses an integer ("-3"), a fraction ("2/3") or an exact decimal
/// ("0.125", "-1.5e-2" is rejected). Throws ParseError on anything else,
/// including floating-point suffixes such as "0.1f".
Rational parse_rational(std::string_view text);

}  // namespace mmc
