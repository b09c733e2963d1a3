#pragma once

#include <gmpxx.h>

#include <concepts>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace hyperid {

/// Exact rational number, always kept in canonical form (coprime
/// numerator and denominator, positive denominator).
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& numerator, const mpz_class& denominator);
  explicit Rational(mpq_class value);

  /// Accepts "p", "p/q" and decimal notation with optional exponent
  /// ("4.2", "-1.5e-3"); decimals are converted exactly.
  static Rational parse(std::string_view text);

  const mpq_class& value() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  bool is_nonpositive_integer() const { return is_integer() && sign() <= 0; }
  /// Integer value when the number is an integer that fits in a long.
  std::optional<long> to_long() const;
  double to_double() const { return value_.get_d(); }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

Rational abs(const Rational& x);

/// n! as an exact integer.
mpz_class factorial(unsigned long n);

}  // namespace hyperid
