#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hyperid/big_complex.hpp"
#include "hyperid/rational.hpp"

namespace hyperid {

/// The universal scalar: an exact rational or an arbitrary-precision
/// complex number. Arithmetic stays exact while every operand is exact;
/// mixing in a complex operand promotes the rational side to the complex
/// operand's precision.
class Scalar {
 public:
  Scalar() = default;
  template <std::integral I>
  Scalar(I value) : value_(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational value) : value_(std::move(value)) {}    // NOLINT(google-explicit-constructor)
  Scalar(BigComplex value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  /// Rationals ("3", "-5/3"), decimals ("4.2", canonicalized to 21/5) and
  /// complex literals ("1.5+2i", "-i", "3-0.25i"). Complex literals are
  /// rounded to `digits`; purely real input stays exact.
  static Scalar parse(std::string_view text, int digits);

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  /// Throws NotExact for complex values.
  const Rational& exact() const;
  /// nullptr for exact values.
  const BigComplex* complex() const { return std::get_if<BigComplex>(&value_); }
  BigComplex to_complex(int digits) const;
  /// Precision of a complex value; 0 for exact values.
  int digits() const;

  bool is_zero() const;
  /// Integer value when exactly an integer (rational) or within the pole
  /// threshold 10^(-digits/2) of one (complex).
  std::optional<long> near_integer() const;
  bool is_nonpositive_integer() const;

  /// Sign of the real part.
  int sign_re() const;
  Scalar re() const;
  double re_double() const;
  double im_double() const;
  double magnitude() const;

  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Exact equality (mixed operands compare the rounded rational).
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, BigComplex> value_;
};

Scalar pow(const Scalar& base, long exponent);
/// Principal branch; exact when the exponent is an integer.
Scalar pow(const Scalar& base, const Scalar& exponent);

}  // namespace hyperid
