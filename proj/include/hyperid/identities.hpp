#pragma once

#include <string>
#include <vector>

#include "hyperid/family.hpp"
#include "hyperid/scalar.hpp"

namespace hyperid {

enum class Mode { Exact, Float };

std::string to_string(Mode mode);

/// Both sides of one identity instance and their disagreement.
///
/// Exact mode means both sides are exact rationals; the identity then holds
/// iff abs_residual is exactly zero. In float mode est_error is a relative
/// error estimate (always >= 10^-prec) and the identity holds iff
/// rel_residual <= 10 est_error.
struct IdentityReport {
  std::string name;
  Scalar lhs;
  Scalar rhs;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  Mode mode = Mode::Exact;
  double est_error = 0.0;
  bool exact_zero = false;  // lhs - rhs == 0 exactly (exact mode only)

  bool holds() const;
};

/// How identities that involve the zeros zeta of a characteristic polynomial
/// obtain them. Roots runs Aberth-Ehrlich and feeds zeta into the series;
/// Polynomial replaces every symmetric product over zeta by a quotient of
/// values of Q, which keeps rational inputs exact. Auto takes Polynomial when
/// that yields an exact result and Roots otherwise.
enum class ZetaRoute { Auto, Roots, Polynomial };

inline constexpr int kDefaultPrecision = 50;

// Every function below throws PreconditionViolation (or a subclass) when its
// inputs violate the hypotheses of the identity, PoleError when a gamma
// factor sits on a pole, and NoConvergence from the series engine.

/// F(-k, b, f+m; b+1, f) = k!/(b+1)_k (f-b)_m/(f)_m, for k >= m.
IdentityReport minton(int k, const Scalar& b, const ShiftedFamily& family, int prec = kDefaultPrecision);

/// F(a, b, f+m; b+1, f) = Gamma(b+1)Gamma(1-a)/Gamma(b+1-a) (f-b)_m/(f)_m,
/// for Re(1-a-m) > 0.
IdentityReport karlsson(const Scalar& a, const Scalar& b, const ShiftedFamily& family, int prec = kDefaultPrecision);

/// The same two sides with the hypothesis Re(1-a-m) > 0 not enforced; the
/// left side must still be a convergent or terminating series.
IdentityReport karlsson_unchecked(const Scalar& a, const Scalar& b, const ShiftedFamily& family,
                                  int prec = kDefaultPrecision);

/// F(-k, b, f+m; b+1, f) = k!/(b+1)_k (f-b)_m/(f)_m - (-1)^m k! b/(f)_m q_k,
/// for 0 <= k <= m-1. Rejects (b, f) for which the entries of
/// alpha = (b-f) and beta = (b-f-m, b+k) are not pairwise distinct.
IdentityReport minton_extended(int k, const Scalar& b, const ShiftedFamily& family, int prec = kDefaultPrecision);

/// F(a, b, f+m; b+p, f) = Gamma(1-a) (b)_p/(f)_m
///   sum_q Gamma(beta_q)(f-beta_q)_m / (B_q Gamma(1+beta_q-a)),
/// with beta the concatenated runs b_l, ..., b_l+p_l-1 and
/// B_q = prod_{v != q}(beta_v - beta_q). Requires Re(p-a-m) > 0; throws
/// DuplicateBeta when beta has repeated entries.
IdentityReport karlsson_multi(const Scalar& a, const std::vector<Scalar>& b, const std::vector<int>& p,
                              const ShiftedFamily& family, int prec = kDefaultPrecision);

/// F(a, b, f+m; c, f) = Gamma(c)Gamma(1-a)(f-b)_m / (Gamma(1+b-a)Gamma(c-b)(f)_m)
///   F(b, 1-c+b, 1-f+b; 1+b-a, 1-f-m+b),
/// for Re(c-a-b-m) > 0, -c and -f_i not in N_0.
IdentityReport gasper(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family,
                      int prec = kDefaultPrecision);

/// sum_k F(-k,f+m;f)(b)_k(a-k)_{p-1}/k!
///   = sum_{q<p} (b)_q(f-b-q)_m(1-p)_q(b+q+a)_{p-1-q} / ((f)_m q!),
/// for Re(p+a-m-1) > 0.
IdentityReport degenerate_sum(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family,
                              int prec = kDefaultPrecision);

/// F(a, b, f+m; c, f) = Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b))
///   sum_k F(-k,f+m;f)(a)_k(b)_k/((1+a+b-c)_k k!),
/// for Re(c-a-b-m) > 0 and (1+a+b-c)_m != 0.
IdentityReport mp2012_sum(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family,
                          int prec = kDefaultPrecision);

/// F(a, b, f+m; c, f; x) = (1-x)^(-a) F(a, c-b-m, zeta+1; c, zeta; x/(x-1)),
/// zeta the zeros of Q(b,c,f,m;t). Requires |x| < 1/2.
IdentityReport mp_transform(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family,
                            const Scalar& x, int prec = kDefaultPrecision, ZetaRoute route = ZetaRoute::Auto);

/// F(a, b, f+m; c, f) = Gamma(c)Gamma(c-a-b-m)/(Gamma(c-a)Gamma(c-b-m)) Q(b,c,f,m;a),
/// for Re(c-a-b-m) > 0.
IdentityReport q_summation(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family,
                           int prec = kDefaultPrecision);

/// z^b F(1-c+b, 1-f+b; 1-f-m+b; z)
///   = K (1-z)^(c-b-m-1) F(-b-m, 1-zeta*+c-b-m; -zeta*+c-b-m; 1-z),
/// K = (c-b-m)_m (zeta*-c+b+m)_1 (f+1)_m / ((b+1)_m (f-b)_m (zeta*)_1),
/// zeta* the zeros of Q(b+1,c+1,f+1,m;t). Requires 0 < z < 1 and b != f_j.
IdentityReport g_identity(const Scalar& b, const Scalar& c, const ShiftedFamily& family, const Scalar& z,
                          int prec = kDefaultPrecision, ZetaRoute route = ZetaRoute::Roots);

/// F(d, b+a, f+m+a; c+a, f+a)
///   = Gamma(c+a)Gamma(b)(f)_m/(Gamma(c)Gamma(b+a)(f+a)_m)
///     F(d, b, f+m; c, f) F(-a, c-b-m-d, zeta-d+1; c-d, zeta-d),
/// zeta the zeros of Q(b,c,f,m;t), for Re(c-d-b-m) > 0 and Re(a+b) > 0.
IdentityReport product_identity(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d,
                                const ShiftedFamily& family, int prec = kDefaultPrecision,
                                ZetaRoute route = ZetaRoute::Auto);

/// F(a,b,f+m;b+p,f) = (b+p-1)(p-a-1)/((p-1)(b+p-a-1)) F(a,b,f+m;b+p-1,f)
///   + ab/((p-1)(b+p-a-1)) [F(a+1,b+1,f+m;b+p,f)
///                          - ((f+m)_1/(f)_1) F(a+1,b+1,f+m+1;b+p,f+1)],
/// for p >= 2 and Re(p-a-m-2) > 0; every F evaluated as a series.
IdentityReport recurrence_step(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family,
                               int prec = kDefaultPrecision);

/// The recurrence applied down to p = 1 with Karlsson's closed form at the
/// leaves (lhs), against the closed form of karlsson_multi for the single
/// run (b, p) (rhs). Requires p >= 1 and Re(p-a-m) > 0.
IdentityReport recurrence_chain(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family,
                                int prec = kDefaultPrecision);

/// F(-k-1, f+m; f) = F(-k, f+m; f) - ((f+m)_1/(f)_1) F(-k, f+m+1; f+1).
IdentityReport contiguous_shift(int k, const ShiftedFamily& family);

/// F(-m-1, f+m; f) = 0.
IdentityReport terminal_vanishing(const ShiftedFamily& family);

/// F(-m, f+m; f) = (-1)^m m!/(f)_m.
IdentityReport terminal_value(const ShiftedFamily& family);

/// (f-b)_m (1-f-m)_m / ((f)_m (1-f+b-m)_m) = 1; rejects inputs where any of
/// the four products vanishes.
IdentityReport pochhammer_reflection_check(const Scalar& b, const ShiftedFamily& family);

/// Karlsson's formula at a = -4, b = 33/17, f = (21/5, -5/3), m = (7, 8),
/// where k = 4 < m = 15 and the closed form no longer applies.
IdentityReport karlsson_counterexample(int prec = kDefaultPrecision);

/// The same left side against the right side of the extended Minton sum,
/// which covers k < m.
IdentityReport counterexample_resolution(int prec = kDefaultPrecision);

}  // namespace hyperid
