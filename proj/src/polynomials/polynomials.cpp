#include "hyperid/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperid/combinatorics.hpp"
#include "hyperid/errors.hpp"
#include "hyperid/series.hpp"
#include "hyperid/special.hpp"

namespace hyperid {

namespace {

constexpr int kRootGuardDigits = 10;

BigComplex from_doubles(double re, double im, int digits) {
  const mpfr_prec_t bits = bits_for_digits(digits);
  BigReal r(bits);
  BigReal i(bits);
  mpfr_set_d(r.get(), re, MPFR_RNDN);
  mpfr_set_d(i.get(), im, MPFR_RNDN);
  return BigComplex(std::move(r), std::move(i), digits);
}

void check_not_degenerate(const Scalar& b, const Scalar& c, int m) {
  if (const auto d = (c - b).near_integer(); d && *d >= 1 && *d <= m) {
    throw DegenerateQ("(c-b-m)_m vanishes: c - b = " + std::to_string(*d));
  }
}

// F(-k, f+m; f) at unit argument, from the series module.
Scalar terminating_f(const ShiftedFamily& family, int k, int digits) {
  HypParams p;
  p.top.push_back(Scalar(-k));
  for (const auto& s : family.shifted()) p.top.push_back(s);
  p.bottom.assign(family.f().begin(), family.f().end());
  return eval_series(p, std::max(digits, BigComplex::kMinDigits)).value;
}

int working_digits(std::initializer_list<const Scalar*> values) {
  int d = 0;
  for (const auto* v : values) {
    if (v->digits() != 0) d = d == 0 ? v->digits() : std::min(d, v->digits());
  }
  return d == 0 ? WorkingPrecision::current() : d;
}

int family_digits(const ShiftedFamily& family) {
  int d = 0;
  for (const auto& f : family.f()) {
    if (f.digits() != 0) d = d == 0 ? f.digits() : std::min(d, f.digits());
  }
  return d;
}

}  // namespace

// --- ComplexPoly ----------------------------------------------------------------

ComplexPoly::ComplexPoly(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ComplexPoly ComplexPoly::from_roots(const std::vector<Scalar>& roots, const Scalar& leading) {
  ComplexPoly out({leading});
  for (const auto& r : roots) out *= linear(-r, Scalar(1));
  return out;
}

ComplexPoly ComplexPoly::linear(const Scalar& a, const Scalar& b) { return ComplexPoly({a, b}); }

void ComplexPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_exact() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Scalar ComplexPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return Scalar(0);
  return coeffs_[static_cast<std::size_t>(i)];
}

bool ComplexPoly::is_exact() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Scalar& s) { return s.is_exact(); });
}

int ComplexPoly::digits() const {
  int d = 0;
  for (const auto& c : coeffs_) {
    if (c.digits() != 0) d = d == 0 ? c.digits() : std::min(d, c.digits());
  }
  return d;
}

Scalar ComplexPoly::operator()(const Scalar& t) const {
  Scalar acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  std::vector<Scalar> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)] * Scalar(i));
  return ComplexPoly(std::move(d));
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Scalar(0));
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(const ComplexPoly& rhs) {
  if (coeffs_.empty() || rhs.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Scalar> out(coeffs_.size() + rhs.coeffs_.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(const Scalar& rhs) {
  for (auto& c : coeffs_) c *= rhs;
  trim();
  return *this;
}

// --- characteristic polynomials ------------------------------------------------

ComplexPoly pochhammer_poly(const Scalar& shift, int n) {
  ComplexPoly out({Scalar(1)});
  for (int j = 0; j < n; ++j) out *= ComplexPoly::linear(shift + Scalar(j), Scalar(1));
  return out;
}

ComplexPoly build_q(const Scalar& b, const Scalar& c, const ShiftedFamily& family) {
  const int m = family.m_total();
  check_not_degenerate(b, c, m);
  const Scalar base = c - b - Scalar(m);
  ComplexPoly sum;
  for (int k = 0; k <= m; ++k) {
    // (base - t)_{m-k} = prod_j (base + j - t).
    ComplexPoly tail({Scalar(1)});
    for (int j = 0; j < m - k; ++j) tail *= ComplexPoly::linear(base + Scalar(j), Scalar(-1));
    sum += pochhammer_poly(Scalar(0), k) * tail * (pochhammer(b, static_cast<std::size_t>(k)) * c_coeff(family, k));
  }
  return sum * (Scalar(1) / pochhammer(base, static_cast<std::size_t>(m)));
}

Scalar build_q_alt(const Scalar& b, const Scalar& c, const ShiftedFamily& family, const Scalar& t) {
  const int m = family.m_total();
  check_not_degenerate(b, c, m);
  const Scalar lower = Scalar(1) + t + b - c;
  if (pochhammer(lower, static_cast<std::size_t>(m)).is_zero() ||
      (!lower.is_exact() && lower.near_integer() && *lower.near_integer() <= 0 && *lower.near_integer() > -m)) {
    throw PoleError("alternative form of Q has a removable pole at this t");
  }
  const int digits = std::max(working_digits({&b, &c, &t}), family_digits(family));
  Scalar sum(0);
  for (int k = 0; k <= m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    sum += terminating_f(family, k, digits) * pochhammer(t, kk) * pochhammer(b, kk) /
           (pochhammer(lower, kk) * Scalar(Rational(factorial(kk), 1)));
  }
  const auto mm = static_cast<std::size_t>(m);
  return pochhammer(c - b - t - Scalar(m), mm) / pochhammer(c - b - Scalar(m), mm) * sum;
}

ComplexPoly build_r(const Scalar& b, int p, const ShiftedFamily& family) {
  if (p < 1) throw PreconditionViolation("build_r needs p >= 1");
  const int m = family.m_total();
  const int digits = std::max(working_digits({&b}), family_digits(family));
  ComplexPoly sum;
  for (int k = 0; k <= m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const Scalar weight = terminating_f(family, k, digits) * pochhammer(b, kk) / Scalar(Rational(factorial(kk), 1));
    sum += pochhammer_poly(Scalar(-k), p - 1) * weight;
  }
  return sum;
}

// --- roots ------------------------------------------------------------------------

ZetaVector roots(const ComplexPoly& poly, int digits) {
  const int n = poly.degree();
  if (n < 1) throw PreconditionViolation("root finding needs degree >= 1");
  const int w = digits + kRootGuardDigits;

  std::vector<BigComplex> c;
  for (const auto& s : poly.coeffs()) c.push_back(s.to_complex(w));
  const BigComplex lead = c.back();
  for (auto& x : c) x /= lead;

  auto eval = [&](const BigComplex& z, BigComplex& p, BigComplex& dp) {
    p = c.back();
    dp = BigComplex::zero(w);
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c[static_cast<std::size_t>(i)];
    }
  };

  // Initial guesses on a circle of the geometric-mean root radius around
  // the centroid, rotated off the real axis.
  const double centroid_re = -c[static_cast<std::size_t>(n - 1)].re().to_double() / n;
  const double centroid_im = -c[static_cast<std::size_t>(n - 1)].im().to_double() / n;
  double radius = std::pow(std::max(c[0].abs_double(), 1e-300), 1.0 / n);
  for (int i = 0; i < n; ++i) radius = std::max(radius, 0.5 * std::pow(c[static_cast<std::size_t>(i)].abs_double(), 1.0 / (n - i)));
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<BigComplex> z;
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
    z.push_back(from_doubles(centroid_re + radius * std::cos(angle), centroid_im + radius * std::sin(angle), w));
  }

  const double tol = std::pow(10.0, -(w - 2));
  const int max_iter = 400 + 40 * n;
  const BigComplex one = BigComplex::from_long(1, w);
  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      BigComplex p, dp;
      eval(z[static_cast<std::size_t>(i)], p, dp);
      if (p.is_zero()) continue;
      if (dp.is_zero()) {
        // Nudge off a critical point.
        z[static_cast<std::size_t>(i)] += from_doubles(radius * 1e-3, radius * 1e-3, w);
        worst = 1.0;
        continue;
      }
      const BigComplex ratio = p / dp;
      BigComplex repulsion = BigComplex::zero(w);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const BigComplex gap = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
        if (!gap.is_zero()) repulsion += one / gap;
      }
      const BigComplex denom = one - ratio * repulsion;
      const BigComplex step = denom.is_zero() ? ratio : ratio / denom;
      z[static_cast<std::size_t>(i)] -= step;
      worst = std::max(worst, step.abs_double() / std::max(1.0, z[static_cast<std::size_t>(i)].abs_double()));
    }
    if (worst <= tol) break;
  }

  // Residual check against the unnormalized coefficients.
  const double accept = std::pow(10.0, -digits / 2.0);
  ZetaVector out;
  for (auto& root : z) {
    const Scalar r(root.with_digits(digits));
    const double zabs = root.abs_double();
    double bound = 0.0;
    double power = 1.0;
    for (const auto& coeff : poly.coeffs()) {
      bound += coeff.magnitude() * power;
      power *= zabs;
    }
    const double residual = poly(Scalar(root)).magnitude();
    if (!(residual <= accept * bound)) {
      throw RootFindingFailure("root residual " + std::to_string(residual) + " exceeds tolerance");
    }
    out.roots.push_back(r);
  }
  return out;
}

ZetaVector q_roots(const Scalar& b, const Scalar& c, const ShiftedFamily& family, int digits) {
  ZetaVector out = roots(build_q(b, c, family), digits);
  out.source = QSource{b, c, family};
  return out;
}

}  // namespace hyperid
