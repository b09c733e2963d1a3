#include "hyperid/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperid/errors.hpp"

namespace hyperid {

namespace {

int combined_digits(const Scalar& a, const Scalar& b) {
  const int da = a.digits();
  const int db = b.digits();
  if (da == 0) return db;
  if (db == 0) return da;
  return std::min(da, db);
}

// Position of the sign separating real and imaginary parts, or npos.
std::size_t split_position(std::string_view text) {
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') return i;
  }
  return std::string_view::npos;
}

Rational parse_imaginary_coefficient(std::string_view text) {
  if (text.empty() || text == "+") return Rational(1);
  if (text == "-") return Rational(-1);
  return Rational::parse(text);
}

}  // namespace

Scalar Scalar::parse(std::string_view text, int digits) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty scalar literal");
  if (text.back() != 'i') return Scalar(Rational::parse(text));

  const std::string_view body = text.substr(0, text.size() - 1);
  const std::size_t split = split_position(body);
  Rational re(0);
  Rational im(0);
  if (split == std::string_view::npos) {
    im = parse_imaginary_coefficient(body);
  } else {
    re = Rational::parse(body.substr(0, split));
    im = parse_imaginary_coefficient(body.substr(split));
  }
  if (im.is_zero()) return Scalar(re);
  return Scalar(BigComplex(re, im, digits));
}

const Rational& Scalar::exact() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r;
  throw NotExact("scalar is not an exact rational");
}

BigComplex Scalar::to_complex(int digits) const {
  if (const auto* r = std::get_if<Rational>(&value_)) return BigComplex(*r, digits);
  return std::get<BigComplex>(value_).with_digits(digits);
}

int Scalar::digits() const {
  if (const auto* c = complex()) return c->digits();
  return 0;
}

bool Scalar::is_zero() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->is_zero();
  return std::get<BigComplex>(value_).is_zero();
}

std::optional<long> Scalar::near_integer() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_long();
  long out = 0;
  if (hyperid::near_integer(std::get<BigComplex>(value_), out)) return out;
  return std::nullopt;
}

bool Scalar::is_nonpositive_integer() const {
  const auto n = near_integer();
  return n.has_value() && *n <= 0;
}

int Scalar::sign_re() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->sign();
  return std::get<BigComplex>(value_).re().sign();
}

Scalar Scalar::re() const {
  if (is_exact()) return *this;
  const auto& c = std::get<BigComplex>(value_);
  return Scalar(BigComplex(c.re(), BigReal(c.re().bits()), c.digits()));
}

double Scalar::re_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_double();
  return std::get<BigComplex>(value_).re().to_double();
}

double Scalar::im_double() const {
  if (is_exact()) return 0.0;
  return std::get<BigComplex>(value_).im().to_double();
}

double Scalar::magnitude() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return std::fabs(r->to_double());
  return std::get<BigComplex>(value_).abs_double();
}

std::string Scalar::to_string() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_string();
  return std::get<BigComplex>(value_).to_string();
}

Scalar Scalar::operator-() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return Scalar(-*r);
  return Scalar(-std::get<BigComplex>(value_));
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<Rational>(value_) += std::get<Rational>(rhs.value_);
  } else {
    const int d = combined_digits(*this, rhs);
    value_ = to_complex(d) + rhs.to_complex(d);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<Rational>(value_) -= std::get<Rational>(rhs.value_);
  } else {
    const int d = combined_digits(*this, rhs);
    value_ = to_complex(d) - rhs.to_complex(d);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<Rational>(value_) *= std::get<Rational>(rhs.value_);
  } else {
    const int d = combined_digits(*this, rhs);
    value_ = to_complex(d) * rhs.to_complex(d);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<Rational>(value_) /= std::get<Rational>(rhs.value_);
  } else {
    const int d = combined_digits(*this, rhs);
    value_ = to_complex(d) / rhs.to_complex(d);
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  const int d = combined_digits(a, b);
  return a.to_complex(d) == b.to_complex(d);
}

Scalar pow(const Scalar& base, long exponent) {
  if (exponent < 0) {
    if (base.is_zero()) throw DivisionByZero("zero raised to a negative power");
    return Scalar(1) / pow(base, -exponent);
  }
  Scalar result(1);
  Scalar square = base;
  for (unsigned long e = static_cast<unsigned long>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= square;
    if (e > 1) square *= square;
  }
  return result;
}

Scalar pow(const Scalar& base, const Scalar& exponent) {
  if (exponent.is_exact() && exponent.exact().is_integer()) {
    if (const auto n = exponent.exact().to_long()) return pow(base, *n);
  }
  int d = combined_digits(base, exponent);
  if (d == 0) d = WorkingPrecision::current();
  return Scalar(pow(base.to_complex(d), exponent.to_complex(d)));
}

}  // namespace hyperid
