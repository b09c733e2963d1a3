#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "hyperid/errors.hpp"
#include "hyperid/special.hpp"

namespace hyperid {

namespace {

// Spouge coefficients for a given target precision.
struct SpougeTable {
  long a = 0;
  int digits = 0;  // precision the sum is carried out at
  std::vector<BigComplex> coeffs;  // c_0 .. c_{a-1}
};

// Relative error of Spouge's formula is below a^(-1/2) (2 pi)^-(a+1/2); the
// alternating sum loses roughly as many digits as it produces, so it is
// evaluated at about twice the target precision.
std::shared_ptr<const SpougeTable> spouge_table(int target_digits) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SpougeTable>> cache;

  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(target_digits); it != cache.end()) return it->second;

  auto table = std::make_shared<SpougeTable>();
  table->a = static_cast<long>(std::ceil((target_digits + 3) * std::log(10.0) / std::log(2.0 * M_PI))) + 1;
  table->digits = 2 * target_digits + 20;
  const mpfr_prec_t bits = bits_for_digits(table->digits);

  BigReal two_pi(bits), c(bits), t(bits), fact(bits);
  mpfr_const_pi(two_pi.get(), MPFR_RNDN);
  mpfr_mul_ui(two_pi.get(), two_pi.get(), 2, MPFR_RNDN);
  mpfr_sqrt(c.get(), two_pi.get(), MPFR_RNDN);
  table->coeffs.emplace_back(c, BigReal(bits), table->digits);

  mpfr_set_ui(fact.get(), 1, MPFR_RNDN);  // (k-1)!
  for (long k = 1; k < table->a; ++k) {
    if (k > 1) mpfr_mul_ui(fact.get(), fact.get(), static_cast<unsigned long>(k - 1), MPFR_RNDN);
    // (a-k)^(k-1/2) e^(a-k) / (k-1)!
    mpfr_set_si(t.get(), table->a - k, MPFR_RNDN);
    mpfr_set_d(c.get(), static_cast<double>(k) - 0.5, MPFR_RNDN);
    mpfr_pow(c.get(), t.get(), c.get(), MPFR_RNDN);
    mpfr_exp(t.get(), t.get(), MPFR_RNDN);
    mpfr_mul(c.get(), c.get(), t.get(), MPFR_RNDN);
    mpfr_div(c.get(), c.get(), fact.get(), MPFR_RNDN);
    if (k % 2 == 0) mpfr_neg(c.get(), c.get(), MPFR_RNDN);
    table->coeffs.emplace_back(c, BigReal(bits), table->digits);
  }
  cache.emplace(target_digits, table);
  return table;
}

// Gamma(z + 1) for Re z >= -1/2 (Spouge).
BigComplex spouge_gamma_plus_one(const BigComplex& z, int target_digits) {
  const auto table = spouge_table(target_digits);
  const BigComplex zw = z.with_digits(table->digits);
  BigComplex sum = table->coeffs[0];
  for (long k = 1; k < table->a; ++k) {
    sum += table->coeffs[static_cast<std::size_t>(k)] / (zw + BigComplex::from_long(k, table->digits));
  }
  const BigComplex half(Rational(mpz_class(1), mpz_class(2)), table->digits);
  const BigComplex shifted = zw + BigComplex::from_long(table->a, table->digits);
  // (z+a)^(z+1/2) e^-(z+a)
  const BigComplex prefactor = exp((zw + half) * log(shifted) - shifted);
  return prefactor * sum;
}

}  // namespace

Scalar pochhammer(const Scalar& a, std::size_t n) {
  Scalar out(1);
  for (std::size_t i = 0; i < n; ++i) out *= a + Scalar(static_cast<long>(i));
  return out;
}

Scalar pochhammer(std::span<const Scalar> v, std::size_t n) {
  Scalar out(1);
  for (const auto& a : v) out *= pochhammer(a, n);
  return out;
}

Scalar pochhammer(std::span<const Scalar> v, std::span<const int> n) {
  if (v.size() != n.size()) throw std::invalid_argument("pochhammer: vector length mismatch");
  Scalar out(1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (n[i] < 0) throw std::invalid_argument("pochhammer: negative index");
    out *= pochhammer(v[i], static_cast<std::size_t>(n[i]));
  }
  return out;
}

BigComplex gamma(const BigComplex& z) {
  long pole = 0;
  if (near_integer(z, pole) && pole <= 0) {
    throw PoleError("gamma pole at " + std::to_string(pole));
  }
  const int digits = z.digits();
  const int inner = digits + 5;
  const BigComplex zi = z.with_digits(inner);

  // Re z < 1/2: reflection.
  BigReal twice_re(zi.re().bits());
  mpfr_mul_ui(twice_re.get(), zi.re().get(), 2, MPFR_RNDN);
  if (mpfr_cmp_ui(twice_re.get(), 1) < 0) {
    const BigComplex one = BigComplex::from_long(1, inner);
    const BigComplex pi = BigComplex::pi(inner);
    const BigComplex reflected = one - zi;
    const BigComplex g = spouge_gamma_plus_one(reflected, inner).with_digits(inner) / reflected;
    return (pi / (sin(pi * zi) * g)).with_digits(digits);
  }
  return (spouge_gamma_plus_one(zi, inner).with_digits(inner) / zi).with_digits(digits);
}

Scalar gamma(const Scalar& z) {
  if (z.is_exact()) {
    const Rational& r = z.exact();
    if (r.is_integer()) {
      if (r.sign() <= 0) throw PoleError("gamma pole at " + r.to_string());
      const auto n = r.to_long();
      if (!n) throw std::overflow_error("gamma argument too large for exact factorial");
      return Scalar(Rational(factorial(static_cast<unsigned long>(*n - 1)), mpz_class(1)));
    }
    return Scalar(gamma(BigComplex(r, WorkingPrecision::current())));
  }
  return Scalar(gamma(*z.complex()));
}

Scalar gamma_ratio(std::span<const Scalar> num, std::span<const Scalar> den) {
  std::vector<bool> used(num.size(), false);
  Scalar out(1);
  for (const auto& d : den) {
    std::size_t best = num.size();
    long best_shift = 0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (used[i]) continue;
      const auto k = (num[i] - d).near_integer();
      if (k && (best == num.size() || std::labs(*k) < std::labs(best_shift))) {
        best = i;
        best_shift = *k;
      }
    }
    if (best == num.size()) {
      if (d.is_nonpositive_integer()) throw PoleError("unpaired gamma pole in denominator");
      out /= gamma(d);
      continue;
    }
    used[best] = true;
    if (best_shift >= 0) {
      // Gamma(d + k) / Gamma(d) = (d)_k
      out *= pochhammer(d, static_cast<std::size_t>(best_shift));
    } else {
      // Gamma(n) / Gamma(n + k) = 1 / (n)_k
      const Scalar q = pochhammer(num[best], static_cast<std::size_t>(-best_shift));
      if (q.is_zero()) throw PoleError("gamma ratio has a numerator pole");
      out /= q;
    }
  }
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (used[i]) continue;
    if (num[i].is_nonpositive_integer()) throw PoleError("unpaired gamma pole in numerator");
    out *= gamma(num[i]);
  }
  return out;
}

}  // namespace hyperid
