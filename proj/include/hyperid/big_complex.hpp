#pragma once

#include <mpfr.h>

#include <string>

#include "hyperid/rational.hpp"

namespace hyperid {

/// Mantissa bits used for a given number of decimal digits.
mpfr_prec_t bits_for_digits(int digits);

/// Thread-local default working precision (decimal digits) used whenever a
/// value has to be promoted to floating point without an explicit
/// precision. Scoped: the previous value is restored on destruction.
class WorkingPrecision {
 public:
  static constexpr int kDefaultDigits = 50;

  explicit WorkingPrecision(int digits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

  static int current();

 private:
  int saved_;
};

/// RAII owner of an mpfr_t.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Scientific notation with the given number of significant digits.
  std::string to_string(int digits) const;

 private:
  mpfr_t value_;
};

/// Arbitrary-precision complex number carrying its working precision in
/// decimal digits. Binary operations produce a result at the smaller of
/// the two operand precisions.
class BigComplex {
 public:
  static constexpr int kMinDigits = 16;

  /// Zero at the current working precision.
  BigComplex();
  BigComplex(const Rational& re, int digits);
  BigComplex(const Rational& re, const Rational& im, int digits);
  BigComplex(BigReal re, BigReal im, int digits);

  static BigComplex zero(int digits);
  static BigComplex from_long(long value, int digits);
  static BigComplex pi(int digits);

  int digits() const { return digits_; }
  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }

  /// Same value rounded (or zero-extended) to another precision.
  BigComplex with_digits(int digits) const;

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  BigReal abs() const;
  double abs_double() const;

  /// "x" for real values, "x+yi" otherwise, with `digits` significant
  /// digits (0 = the value's own precision).
  std::string to_string(int digits = 0) const;

  BigComplex operator-() const;
  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator/=(const BigComplex& rhs);

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }

  friend bool operator==(const BigComplex& a, const BigComplex& b);

 private:
  void set_digits(int digits);

  BigReal re_;
  BigReal im_;
  int digits_;
};

BigComplex exp(const BigComplex& z);
/// Principal branch.
BigComplex log(const BigComplex& z);
BigComplex sin(const BigComplex& z);
BigComplex sqrt(const BigComplex& z);
/// Principal branch of z^w; 0^w = 0 for Re w > 0.
BigComplex pow(const BigComplex& z, const BigComplex& w);

/// Distance-based test used for pole detection: true when z lies within
/// 10^(-digits/2) of a (real) integer; the integer is stored in `out`.
bool near_integer(const BigComplex& z, long& out);

}  // namespace hyperid
