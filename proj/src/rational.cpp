#include "mmc/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "mmc/errors.hpp"

namespace mmc {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::str() const { return v_.get_str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void reject(std::string_view text, const char* why) {
  throw ParseError("invalid rational literal \"" + std::string(text) + "\": " + why);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) reject(text, "empty");

  mpq_class value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) reject(text, "expected p/q with decimal digits");
    mpz_class d(std::string(den), 10);
    if (d == 0) reject(text, "zero denominator");
    value = mpq_class(mpz_class(std::string(num), 10), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      reject(text, "expected an exact decimal");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string digits = std::string(whole) + std::string(frac);
    value = mpq_class(mpz_class(digits, 10), scale);
  } else {
    if (!all_digits(body)) reject(text, "expected an integer, p/q or an exact decimal");
    value = mpq_class(mpz_class(std::string(body), 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

}  // namespace mmc
