#include "hyperid/rational.hpp"

#include <cctype>
#include <climits>
#include <stdexcept>

#include "hyperid/errors.hpp"

namespace hyperid {

namespace {

mpz_class parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("malformed integer: " + std::string(text));
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw std::invalid_argument("malformed integer: " + std::string(text));
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return mpz_class(digits, 10);
}

mpz_class pow10(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
  return out;
}

}  // namespace

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
  if (denominator == 0) throw DivisionByZero("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  if (value_.get_den() == 0) throw DivisionByZero("rational with zero denominator");
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
  }

  long exponent = 0;
  std::string_view mantissa = text;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const mpz_class ez = parse_integer(text.substr(e + 1));
    if (!ez.fits_slong_p()) throw std::invalid_argument("exponent out of range");
    exponent = ez.get_si();
    mantissa = text.substr(0, e);
  }

  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    const char ch = mantissa[i];
    if (ch == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
      seen_point = true;
    } else if ((ch == '+' || ch == '-') && i == 0) {
      digits.push_back(ch);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed decimal: " + std::string(text));
    }
  }
  const mpz_class num = parse_integer(digits);
  const long scale = exponent - frac_digits;
  if (scale >= 0) return Rational(num * pow10(static_cast<unsigned long>(scale)), mpz_class(1));
  return Rational(num, pow10(static_cast<unsigned long>(-scale)));
}

std::optional<long> Rational::to_long() const {
  if (!is_integer() || !value_.get_num().fits_slong_p()) return std::nullopt;
  return value_.get_num().get_si();
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DivisionByZero("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace hyperid
