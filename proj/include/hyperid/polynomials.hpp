#pragma once

#include <optional>
#include <vector>

#include "hyperid/family.hpp"
#include "hyperid/scalar.hpp"

namespace hyperid {

/// Polynomial with scalar coefficients in ascending degree. Trailing zero
/// coefficients are trimmed; the zero polynomial has no coefficients and
/// degree -1.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<Scalar> coeffs);

  /// c (t - r_1) ... (t - r_n).
  static ComplexPoly from_roots(const std::vector<Scalar>& roots, const Scalar& leading);
  /// The linear polynomial a + b t.
  static ComplexPoly linear(const Scalar& a, const Scalar& b);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  /// Coefficient of t^i, zero beyond the degree.
  Scalar coeff(int i) const;
  bool is_exact() const;
  /// Smallest coefficient precision in digits, 0 when exact.
  int digits() const;

  Scalar operator()(const Scalar& t) const;
  ComplexPoly derivative() const;

  ComplexPoly& operator+=(const ComplexPoly& rhs);
  ComplexPoly& operator*=(const ComplexPoly& rhs);
  ComplexPoly& operator*=(const Scalar& rhs);
  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator*(ComplexPoly a, const ComplexPoly& b) { return a *= b; }
  friend ComplexPoly operator*(ComplexPoly a, const Scalar& b) { return a *= b; }

 private:
  void trim();

  std::vector<Scalar> coeffs_;
};

/// The (b, c, f, m) data a characteristic polynomial was built from.
struct QSource {
  Scalar b;
  Scalar c;
  ShiftedFamily family;
};

struct ZetaVector {
  std::vector<Scalar> roots;
  std::optional<QSource> source;
};

/// (t + s)_n as a polynomial in t.
ComplexPoly pochhammer_poly(const Scalar& shift, int n);

/// Q(b,c,f,m;t) = (1/(c-b-m)_m) sum_k (b)_k C_{k,r} (t)_k (c-b-m-t)_{m-k},
/// expanded exactly in rational mode. Q(0) = 1. Throws DegenerateQ when
/// c - b is one of 1..m.
ComplexPoly build_q(const Scalar& b, const Scalar& c, const ShiftedFamily& family);

/// Q(b,c,f,m;t) at one point through
/// ((c-b-t-m)_m/(c-b-m)_m) sum_k F(-k,f+m;f) (t)_k (b)_k / ((1+t+b-c)_k k!).
/// Throws DegenerateQ as build_q, and PoleError where (1+t+b-c)_m = 0.
Scalar build_q_alt(const Scalar& b, const Scalar& c, const ShiftedFamily& family, const Scalar& t);

/// R_{p-1}(a) = sum_k F(-k,f+m;f) (b)_k (a-k)_{p-1} / k!, a polynomial in
/// a of degree at most p-1.
ComplexPoly build_r(const Scalar& b, int p, const ShiftedFamily& family);

/// All roots with multiplicity by Aberth-Ehrlich iteration at `digits`
/// (plus guard digits). Every root satisfies
/// |P(z)| <= 10^(-digits/2) sum_i |c_i| |z|^i; otherwise throws
/// RootFindingFailure. Requires degree >= 1.
ZetaVector roots(const ComplexPoly& poly, int digits);

/// Roots of build_q(b, c, family), with the source recorded.
ZetaVector q_roots(const Scalar& b, const Scalar& c, const ShiftedFamily& family, int digits);

}  // namespace hyperid
