#include "hyperid/big_complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hyperid/errors.hpp"

namespace hyperid {

namespace {

thread_local int t_working_digits = WorkingPrecision::kDefaultDigits;

constexpr mpfr_prec_t kGuardBits = 32;

int checked_digits(int digits) {
  if (digits < BigComplex::kMinDigits) {
    throw std::invalid_argument("precision must be at least 16 decimal digits");
  }
  return digits;
}

std::string format_real(mpfr_srcptr x, int digits) {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), x) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 8;
}

WorkingPrecision::WorkingPrecision(int digits) : saved_(t_working_digits) {
  t_working_digits = checked_digits(digits);
}

WorkingPrecision::~WorkingPrecision() { t_working_digits = saved_; }

int WorkingPrecision::current() { return t_working_digits; }

// --- BigReal ---------------------------------------------------------------

BigReal::BigReal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

std::string BigReal::to_string(int digits) const { return format_real(value_, digits); }

// --- BigComplex ------------------------------------------------------------

BigComplex::BigComplex() : BigComplex(zero(WorkingPrecision::current())) {}

BigComplex::BigComplex(const Rational& re, int digits)
    : re_(bits_for_digits(checked_digits(digits))), im_(bits_for_digits(digits)), digits_(digits) {
  mpfr_set_q(re_.get(), re.value().get_mpq_t(), MPFR_RNDN);
}

BigComplex::BigComplex(const Rational& re, const Rational& im, int digits) : BigComplex(re, digits) {
  mpfr_set_q(im_.get(), im.value().get_mpq_t(), MPFR_RNDN);
}

BigComplex::BigComplex(BigReal re, BigReal im, int digits)
    : re_(std::move(re)), im_(std::move(im)), digits_(checked_digits(digits)) {
  const mpfr_prec_t bits = bits_for_digits(digits_);
  mpfr_prec_round(re_.get(), bits, MPFR_RNDN);
  mpfr_prec_round(im_.get(), bits, MPFR_RNDN);
}

BigComplex BigComplex::zero(int digits) { return BigComplex(Rational(0), digits); }

BigComplex BigComplex::from_long(long value, int digits) { return BigComplex(Rational(value), digits); }

BigComplex BigComplex::pi(int digits) {
  BigComplex out = zero(digits);
  mpfr_const_pi(out.re_.get(), MPFR_RNDN);
  return out;
}

BigComplex BigComplex::with_digits(int digits) const {
  BigComplex out(*this);
  out.set_digits(checked_digits(digits));
  return out;
}

void BigComplex::set_digits(int digits) {
  const mpfr_prec_t bits = bits_for_digits(digits);
  mpfr_prec_round(re_.get(), bits, MPFR_RNDN);
  mpfr_prec_round(im_.get(), bits, MPFR_RNDN);
  digits_ = digits;
}

BigReal BigComplex::abs() const {
  BigReal out(re_.bits());
  mpfr_hypot(out.get(), re_.get(), im_.get(), MPFR_RNDN);
  return out;
}

double BigComplex::abs_double() const { return abs().to_double(); }

std::string BigComplex::to_string(int digits) const {
  const int d = digits > 0 ? digits : digits_;
  if (is_real()) return format_real(re_.get(), d);
  std::string out = format_real(re_.get(), d);
  std::string im = format_real(im_.get(), d);
  if (im.front() != '-') out.push_back('+');
  out += im;
  out.push_back('i');
  return out;
}

BigComplex BigComplex::operator-() const {
  BigComplex out(*this);
  mpfr_neg(out.re_.get(), out.re_.get(), MPFR_RNDN);
  mpfr_neg(out.im_.get(), out.im_.get(), MPFR_RNDN);
  return out;
}

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  if (rhs.digits_ < digits_) set_digits(rhs.digits_);
  mpfr_add(re_.get(), re_.get(), rhs.re_.get(), MPFR_RNDN);
  mpfr_add(im_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  if (rhs.digits_ < digits_) set_digits(rhs.digits_);
  mpfr_sub(re_.get(), re_.get(), rhs.re_.get(), MPFR_RNDN);
  mpfr_sub(im_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  const int digits = std::min(digits_, rhs.digits_);
  const mpfr_prec_t bits = bits_for_digits(digits);
  BigReal re(bits), im(bits);
  mpfr_fmms(re.get(), re_.get(), rhs.re_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
  mpfr_fmma(im.get(), re_.get(), rhs.im_.get(), im_.get(), rhs.re_.get(), MPFR_RNDN);
  re_ = std::move(re);
  im_ = std::move(im);
  digits_ = digits;
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& rhs) {
  if (rhs.is_zero()) throw DivisionByZero("complex division by zero");
  const int digits = std::min(digits_, rhs.digits_);
  const mpfr_prec_t bits = bits_for_digits(digits);
  const mpfr_prec_t wide = bits + kGuardBits;
  BigReal den(wide), re(wide), im(wide);
  mpfr_fmma(den.get(), rhs.re_.get(), rhs.re_.get(), rhs.im_.get(), rhs.im_.get(), MPFR_RNDN);
  mpfr_fmma(re.get(), re_.get(), rhs.re_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
  mpfr_fmms(im.get(), im_.get(), rhs.re_.get(), re_.get(), rhs.im_.get(), MPFR_RNDN);
  mpfr_div(re.get(), re.get(), den.get(), MPFR_RNDN);
  mpfr_div(im.get(), im.get(), den.get(), MPFR_RNDN);
  re_ = std::move(re);
  im_ = std::move(im);
  set_digits(digits);
  return *this;
}

bool operator==(const BigComplex& a, const BigComplex& b) {
  return mpfr_equal_p(a.re_.get(), b.re_.get()) && mpfr_equal_p(a.im_.get(), b.im_.get());
}

// --- elementary functions ----------------------------------------------------

BigComplex exp(const BigComplex& z) {
  const mpfr_prec_t wide = bits_for_digits(z.digits()) + kGuardBits;
  BigReal mag(wide), s(wide), c(wide);
  mpfr_exp(mag.get(), z.re().get(), MPFR_RNDN);
  mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), mag.get(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), mag.get(), MPFR_RNDN);
  return BigComplex(std::move(c), std::move(s), z.digits());
}

BigComplex log(const BigComplex& z) {
  if (z.is_zero()) throw PoleError("log of zero");
  const mpfr_prec_t wide = bits_for_digits(z.digits()) + kGuardBits;
  BigReal mag(wide), arg(wide);
  mpfr_hypot(mag.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  mpfr_log(mag.get(), mag.get(), MPFR_RNDN);
  mpfr_atan2(arg.get(), z.im().get(), z.re().get(), MPFR_RNDN);
  return BigComplex(std::move(mag), std::move(arg), z.digits());
}

BigComplex sin(const BigComplex& z) {
  const mpfr_prec_t wide = bits_for_digits(z.digits()) + kGuardBits;
  BigReal s(wide), c(wide), sh(wide), ch(wide);
  mpfr_sin_cos(s.get(), c.get(), z.re().get(), MPFR_RNDN);
  mpfr_sinh_cosh(sh.get(), ch.get(), z.im().get(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), ch.get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), sh.get(), MPFR_RNDN);
  return BigComplex(std::move(s), std::move(c), z.digits());
}

BigComplex sqrt(const BigComplex& z) {
  if (z.is_zero()) return z;
  if (z.is_real() && z.re().sign() > 0) {
    BigReal r(bits_for_digits(z.digits()));
    mpfr_sqrt(r.get(), z.re().get(), MPFR_RNDN);
    return BigComplex(std::move(r), BigReal(bits_for_digits(z.digits())), z.digits());
  }
  const BigComplex half(Rational(mpz_class(1), mpz_class(2)), z.digits());
  return exp(log(z) * half);
}

BigComplex pow(const BigComplex& z, const BigComplex& w) {
  if (z.is_zero()) {
    if (w.re().sign() > 0) return BigComplex::zero(std::min(z.digits(), w.digits()));
    throw PoleError("zero raised to a power with nonpositive real part");
  }
  const int digits = std::min(z.digits(), w.digits());
  const int wide = digits + 10;
  return exp(log(z.with_digits(wide)) * w.with_digits(wide)).with_digits(digits);
}

bool near_integer(const BigComplex& z, long& out) {
  const mpfr_prec_t bits = z.re().bits();
  BigReal tol(bits), nearest(bits), diff(bits);
  mpfr_set_ui(tol.get(), 10, MPFR_RNDN);
  mpfr_pow_si(tol.get(), tol.get(), -(z.digits() / 2), MPFR_RNDN);
  if (mpfr_cmpabs(z.im().get(), tol.get()) > 0) return false;
  mpfr_round(nearest.get(), z.re().get());
  mpfr_sub(diff.get(), z.re().get(), nearest.get(), MPFR_RNDN);
  if (mpfr_cmpabs(diff.get(), tol.get()) > 0) return false;
  if (!mpfr_fits_slong_p(nearest.get(), MPFR_RNDN)) return false;
  out = mpfr_get_si(nearest.get(), MPFR_RNDN);
  return true;
}

}  // namespace hyperid
