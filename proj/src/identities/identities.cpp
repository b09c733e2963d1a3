#include "hyperid/identities.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "approx.hpp"
#include "hyperid/combinatorics.hpp"
#include "hyperid/errors.hpp"
#include "hyperid/polynomials.hpp"
#include "hyperid/series.hpp"
#include "hyperid/special.hpp"

namespace hyperid {

using detail::Approx;
using detail::exact;
using detail::gratio;
using detail::numeric;
using detail::series;

std::string to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "float"; }

bool IdentityReport::holds() const {
  if (mode == Mode::Exact) return exact_zero;
  return std::isfinite(rel_residual) && rel_residual <= 10.0 * est_error;
}

namespace {

constexpr int kGuard = 10;
constexpr int kMinPrecision = 16;
constexpr int kMaxPrecision = 290;

int working_digits(int prec) {
  if (prec < kMinPrecision || prec > kMaxPrecision) {
    throw PreconditionViolation("precision must lie in [" + std::to_string(kMinPrecision) + ", " +
                                std::to_string(kMaxPrecision) + "], got " + std::to_string(prec));
  }
  return prec + kGuard;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionViolation(what);
}

// (x)_n == 0, i.e. x is one of 0, -1, ..., -(n-1).
bool poch_vanishes(const Scalar& x, int n) {
  const auto z = x.near_integer();
  return z && *z <= 0 && *z > -n;
}

bool same(const Scalar& x, const Scalar& y) {
  const Scalar d = x - y;
  if (d.is_exact()) return d.is_zero();
  return d.magnitude() <= std::pow(10.0, -d.digits() / 2) * std::max(1.0, x.magnitude());
}

bool all_distinct(const std::vector<Scalar>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (same(v[i], v[j])) return false;
  return true;
}

std::vector<Scalar> concat(std::vector<Scalar> a, const std::vector<Scalar>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// prod_i (v_i)_{m_i} without family validation.
Scalar poch_family(const std::vector<Scalar>& v, std::span<const int> m) { return pochhammer(std::span(v), m); }

// (f+m)_1/(f)_1 = prod (f_i+m_i)/f_i.
Scalar shift_ratio(const ShiftedFamily& family) {
  Scalar r(1);
  for (std::size_t i = 0; i < family.size(); ++i) r *= (family.f()[i] + family.m()[i]) / family.f()[i];
  return r;
}

// F(-k, f+m; f), exact for exact families.
Approx terminating_c(int k, const ShiftedFamily& family, int w) {
  return series(concat({Scalar(-k)}, family.shifted()), {family.f().begin(), family.f().end()}, Scalar(1), w);
}

IdentityReport make_report(std::string name, const Approx& lhs, const Approx& rhs, int prec) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs.v;
  r.rhs = rhs.v;
  const Scalar diff = lhs.v - rhs.v;
  r.abs_residual = diff.magnitude();
  const double ml = lhs.v.magnitude();
  const double mr = rhs.v.magnitude();
  const double scale = std::max(ml, mr);
  if (scale > 0.0) {
    const Scalar& big = ml >= mr ? lhs.v : rhs.v;
    r.rel_residual = (diff / big).magnitude();
  }
  const bool exact_sides = lhs.v.is_exact() && rhs.v.is_exact();
  r.mode = exact_sides ? Mode::Exact : Mode::Float;
  if (exact_sides) {
    r.exact_zero = diff.is_zero();
    r.est_error = 0.0;
  } else {
    const double err = lhs.err + rhs.err;
    r.est_error = (scale > 0.0 ? err / scale : err) + std::pow(10.0, -prec);
  }
  return r;
}

// Gamma(b+1)Gamma(1-a)/Gamma(b+1-a) (f-b)_m/(f)_m.
Approx karlsson_rhs(const Scalar& a, const Scalar& b, const ShiftedFamily& family, int w) {
  const Approx g = gratio({b + 1, Scalar(1) - a}, {b + 1 - a}, w);
  return g * exact(family.pochhammer_at(-b) / family.pochhammer());
}

Approx karlsson_lhs(const Scalar& a, const Scalar& b, const ShiftedFamily& family, int w) {
  return series(concat({a, b}, family.shifted()), concat({b + 1}, {family.f().begin(), family.f().end()}), Scalar(1),
                w);
}

std::vector<Scalar> expand_beta(const std::vector<Scalar>& b, const std::vector<int>& p) {
  std::vector<Scalar> beta;
  for (std::size_t l = 0; l < b.size(); ++l)
    for (int j = 0; j < p[l]; ++j) beta.push_back(b[l] + j);
  return beta;
}

// Gamma(1-a) (b)_p/(f)_m sum_q Gamma(beta_q)(f-beta_q)_m/(B_q Gamma(1+beta_q-a)).
Approx multi_rhs(const Scalar& a, const std::vector<Scalar>& b, const std::vector<int>& p, const ShiftedFamily& family,
                 int w) {
  const std::vector<Scalar> beta = expand_beta(b, p);
  if (!all_distinct(beta)) throw DuplicateBeta("expanded beta vector has repeated entries");
  Approx sum = exact(Scalar(0));
  for (std::size_t q = 0; q < beta.size(); ++q) {
    Scalar bq(1);
    for (std::size_t v = 0; v < beta.size(); ++v)
      if (v != q) bq *= beta[v] - beta[q];
    const Approx g = gratio({beta[q]}, {beta[q] + 1 - a}, w);
    sum = sum + g * exact(family.pochhammer_at(-beta[q]) / bq);
  }
  const Approx g1a = gratio({Scalar(1) - a}, {}, w);
  return g1a * exact(pochhammer(std::span(b), std::span(p)) / family.pochhammer()) * sum;
}

void require_family_free_of_b(const Scalar& b, const ShiftedFamily& family) {
  for (const auto& f : family.f()) require(!same(b, f), "b must differ from every f_j");
}

// Throws DegenerateQ through build_q when (c-b-m)_m vanishes.
ComplexPoly checked_q(const Scalar& b, const Scalar& c, const ShiftedFamily& family) { return build_q(b, c, family); }

std::vector<Scalar> zeta_roots(const Scalar& b, const Scalar& c, const ShiftedFamily& family, int w) {
  return q_roots(b, c, family, w).roots;
}

Approx from(const SeriesResult& r) { return Approx{r.value, r.est_error}; }

std::vector<Scalar> offset(const std::vector<Scalar>& v, int d) {
  std::vector<Scalar> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x + d);
  return out;
}

// p(a0 + a1 n) as a polynomial in n.
ComplexPoly compose_linear(const ComplexPoly& p, const Scalar& a0, const Scalar& a1) {
  ComplexPoly out;
  const ComplexPoly lin = ComplexPoly::linear(a0, a1);
  for (int i = p.degree(); i >= 0; --i) out = out * lin + ComplexPoly({p.coeff(i)});
  return out;
}

// sum_n P(n) (top)_n/((bottom)_n n!) x^n for a polynomial weight P.
Approx weighted_series(const std::vector<Scalar>& top, const std::vector<Scalar>& bottom, const Scalar& x,
                       const ComplexPoly& weight, int w) {
  const HypParams params{top, bottom, x};
  const Classification cls = classify(params);
  if (cls.kind == SeriesKind::Terminating) {
    std::vector<Scalar> weights;
    for (int n = 0; n <= cls.k; ++n) weights.push_back(weight(Scalar(n)));
    return from(weighted_terminating_sum(params, cls.k, weights, w));
  }
  // n^i = sum_j S(i,j) n(n-1)...(n-j+1), and the falling factorial of
  // degree j shifts every parameter by j:
  // sum_n n(n-1)...(n-j+1) t_n = x^j (top)_j/(bottom)_j F(top+j; bottom+j; x).
  Approx sum = exact(Scalar(0));
  for (int j = 0; j <= weight.degree(); ++j) {
    Scalar cj(0);
    for (int i = j; i <= weight.degree(); ++i)
      cj += weight.coeff(i) * Scalar(Rational(stirling2(static_cast<unsigned>(i), static_cast<unsigned>(j))));
    if (cj.is_zero()) continue;
    const Scalar den = pochhammer(std::span(bottom), static_cast<std::size_t>(j));
    require(!den.is_zero(), "a shifted bottom parameter vanishes");
    const Scalar scale = cj * pow(x, j) * pochhammer(std::span(top), static_cast<std::size_t>(j)) / den;
    if (scale.is_zero()) continue;
    sum = sum + numeric(scale, w) * series(offset(top, j), offset(bottom, j), x, w);
  }
  return sum;
}

// A top/bottom parameter pair (s + m, s).
struct Pair {
  Scalar s;
  int m;
};

bool any_nonpositive_integer(const std::vector<Pair>& pairs) {
  return std::any_of(pairs.begin(), pairs.end(), [](const Pair& p) { return p.s.is_nonpositive_integer(); });
}

// The series with every pair appended as parameters. When some s is a
// nonpositive integer the pair enters as (s+n)_m/(s)_m instead, the
// continuous extension in s, which the Pochhammer form would truncate.
Approx paired_series(const std::vector<Scalar>& top, const std::vector<Scalar>& bottom, const Scalar& x,
                     const std::vector<Pair>& pairs, int w) {
  if (!any_nonpositive_integer(pairs)) {
    std::vector<Scalar> t = top;
    std::vector<Scalar> b = bottom;
    for (const auto& p : pairs) {
      t.push_back(p.s + p.m);
      b.push_back(p.s);
    }
    return series(t, b, x, w);
  }
  ComplexPoly weight({Scalar(1)});
  for (const auto& p : pairs) {
    const Scalar norm = pochhammer(p.s, static_cast<std::size_t>(p.m));
    require(!norm.is_zero(), "a paired bottom parameter has a vanishing Pochhammer symbol");
    weight *= pochhammer_poly(p.s, p.m) * (Scalar(1) / norm);
  }
  return weighted_series(top, bottom, x, weight, w);
}

bool is_nonneg_integer(const Scalar& x) {
  if (!x.is_exact()) return false;
  const auto z = x.near_integer();
  return z && *z >= 0;
}

Approx chain_value(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family, int w) {
  if (p == 1) return karlsson_rhs(a, b, family, w);
  const Scalar den = Scalar(p - 1) * (b + p - a - 1);
  if (den.is_zero()) throw PoleError("recurrence denominator (p-1)(b+p-a-1) vanishes");
  const Scalar ca = (b + p - 1) * (Scalar(p) - a - 1) / den;
  const Scalar cb = a * b / den;
  const Approx v1 = chain_value(a, b, p - 1, family, w);
  const Approx v2 = chain_value(a + 1, b + 1, p - 1, family, w);
  const Approx v3 = chain_value(a + 1, b + 1, p - 1, family.shift(Scalar(1)), w);
  return exact(ca) * v1 + exact(cb) * (v2 - exact(shift_ratio(family)) * v3);
}

}  // namespace

IdentityReport minton(int k, const Scalar& b, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(k >= family.m_total(), "minton requires k >= m");
  require(!poch_vanishes(b + 1, k), "(b+1)_k must not vanish");
  const Approx lhs = karlsson_lhs(Scalar(-k), b, family, w);
  const Scalar rhs = Scalar(Rational(factorial(k))) / pochhammer(b + 1, k) * family.pochhammer_at(-b) /
                     family.pochhammer();
  return make_report("minton", lhs, numeric(rhs, w), prec);
}

IdentityReport karlsson(const Scalar& a, const Scalar& b, const ShiftedFamily& family, int prec) {
  require((Scalar(1) - a - family.m_total()).sign_re() > 0, "karlsson requires Re(1-a-m) > 0");
  return karlsson_unchecked(a, b, family, prec);
}

IdentityReport karlsson_unchecked(const Scalar& a, const Scalar& b, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const Approx lhs = karlsson_lhs(a, b, family, w);
  return make_report("karlsson", lhs, karlsson_rhs(a, b, family, w), prec);
}

IdentityReport minton_extended(int k, const Scalar& b, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const int m = family.m_total();
  require(k >= 0 && k <= m - 1, "minton_extended requires 0 <= k <= m-1");
  require(!poch_vanishes(b + 1, k), "(b+1)_k must not vanish");
  const NorlundContext ctx = minton_context(b, k, family);
  require(all_distinct(concat(ctx.a(), ctx.b())), "alpha and beta entries must be pairwise distinct");
  const Approx lhs = karlsson_lhs(Scalar(-k), b, family, w);
  const Scalar kf = Scalar(Rational(factorial(k)));
  const Scalar sign = m % 2 == 0 ? Scalar(1) : Scalar(-1);
  const Scalar rhs = kf / pochhammer(b + 1, k) * family.pochhammer_at(-b) / family.pochhammer() -
                     sign * kf * b / family.pochhammer() * q_k_sum(b, k, family);
  return make_report("minton_extended", lhs, numeric(rhs, w), prec);
}

IdentityReport karlsson_multi(const Scalar& a, const std::vector<Scalar>& b, const std::vector<int>& p,
                              const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(!b.empty() && b.size() == p.size(), "b and p must be nonempty and of equal length");
  int ptotal = 0;
  for (int pl : p) {
    require(pl >= 1, "every p_l must be >= 1");
    ptotal += pl;
  }
  require((Scalar(ptotal) - a - family.m_total()).sign_re() > 0, "karlsson_multi requires Re(p-a-m) > 0");
  if (!all_distinct(expand_beta(b, p))) throw DuplicateBeta("expanded beta vector has repeated entries");
  std::vector<Scalar> bottom;
  for (std::size_t l = 0; l < b.size(); ++l) bottom.push_back(b[l] + p[l]);
  const Approx lhs = series(concat(concat({a}, b), family.shifted()),
                            concat(bottom, {family.f().begin(), family.f().end()}), Scalar(1), w);
  return make_report("karlsson_multi", lhs, multi_rhs(a, b, p, family, w), prec);
}

IdentityReport gasper(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const int m = family.m_total();
  require((c - a - b - m).sign_re() > 0, "gasper requires Re(c-a-b-m) > 0");
  require(!c.is_nonpositive_integer(), "c must not be a nonpositive integer");
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const Approx lhs = series(concat({a, b}, family.shifted()), concat({c}, f), Scalar(1), w);
  const std::vector<Scalar> top = {b, Scalar(1) - c + b};
  const std::vector<Scalar> bottom = {Scalar(1) + b - a};
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < f.size(); ++i) pairs.push_back({Scalar(1) - f[i] - family.m()[i] + b, family.m()[i]});
  const Approx g = gratio({c, Scalar(1) - a}, {Scalar(1) + b - a, c - b}, w);
  Approx rest;
  if (any_nonpositive_integer(pairs)) {
    // (f-b)_m = (-1)^m (1-f-m+b)_m folds into the pair weights, which keeps
    // the product finite when (f-b)_m vanishes.
    ComplexPoly weight({m % 2 == 0 ? Scalar(1) : Scalar(-1)});
    for (const auto& p : pairs) weight *= pochhammer_poly(p.s, p.m);
    rest = weighted_series(top, bottom, Scalar(1), weight, w);
  } else {
    rest = exact(family.pochhammer_at(-b)) * paired_series(top, bottom, Scalar(1), pairs, w);
  }
  const Approx rhs = g * exact(Scalar(1) / family.pochhammer()) * rest;
  return make_report("gasper", lhs, rhs, prec);
}

IdentityReport degenerate_sum(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(p >= 1, "degenerate_sum requires p >= 1");
  require((Scalar(p) + a - family.m_total() - 1).sign_re() > 0, "degenerate_sum requires Re(p+a-m-1) > 0");
  const Scalar lhs = build_r(b, p, family)(a);
  Scalar rhs(0);
  for (int q = 0; q < p; ++q) {
    rhs += pochhammer(b, q) * family.pochhammer_at(-b - q) * pochhammer(Scalar(1 - p), q) *
           pochhammer(b + q + a, p - 1 - q) / Scalar(Rational(factorial(q)));
  }
  rhs /= family.pochhammer();
  return make_report("degenerate_sum", numeric(lhs, w), numeric(rhs, w), prec);
}

IdentityReport mp2012_sum(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const int m = family.m_total();
  require((c - a - b - m).sign_re() > 0, "mp2012_sum requires Re(c-a-b-m) > 0");
  const Scalar s = Scalar(1) + a + b - c;
  require(!poch_vanishes(s, m), "(1+a+b-c)_m must not vanish");
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const Approx lhs = series(concat({a, b}, family.shifted()), concat({c}, f), Scalar(1), w);
  Approx sum = exact(Scalar(0));
  for (int k = 0; k <= m; ++k) {
    const Scalar coef = pochhammer(a, k) * pochhammer(b, k) / (pochhammer(s, k) * Scalar(Rational(factorial(k))));
    sum = sum + terminating_c(k, family, w) * exact(coef);
  }
  const Approx rhs = gratio({c, c - a - b}, {c - a, c - b}, w) * sum;
  return make_report("mp2012_sum", lhs, rhs, prec);
}

IdentityReport mp_transform(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family,
                            const Scalar& x, int prec, ZetaRoute route) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(x.magnitude() < 0.5, "mp_transform requires |x| < 1/2");
  const ComplexPoly q = checked_q(b, c, family);
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const Approx lhs = series(concat({a, b}, family.shifted()), concat({c}, f), x, w);
  const Scalar y = x / (x - 1);
  const Approx pre = numeric(pow(Scalar(1) - x, -a), w);
  const int m = family.m_total();
  if (route == ZetaRoute::Auto) route = a.is_nonpositive_integer() ? ZetaRoute::Polynomial : ZetaRoute::Roots;
  Approx rest;
  if (route == ZetaRoute::Polynomial) {
    // (zeta+1)_n/(zeta)_n = Q(-n).
    rest = weighted_series({a, c - b - m}, {c}, y, compose_linear(q, Scalar(0), Scalar(-1)), w);
  } else {
    std::vector<Pair> pairs;
    for (const auto& z : zeta_roots(b, c, family, w)) pairs.push_back({z, 1});
    rest = paired_series({a, c - b - m}, {c}, y, pairs, w);
  }
  return make_report("mp_transform", lhs, pre * rest, prec);
}

IdentityReport q_summation(const Scalar& a, const Scalar& b, const Scalar& c, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const int m = family.m_total();
  require((c - a - b - m).sign_re() > 0, "q_summation requires Re(c-a-b-m) > 0");
  const ComplexPoly q = checked_q(b, c, family);
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const Approx lhs = series(concat({a, b}, family.shifted()), concat({c}, f), Scalar(1), w);
  const Approx rhs = gratio({c, c - a - b - m}, {c - a, c - b - m}, w) * numeric(q(a), w);
  return make_report("q_summation", lhs, rhs, prec);
}

IdentityReport g_identity(const Scalar& b, const Scalar& c, const ShiftedFamily& family, const Scalar& z, int prec,
                          ZetaRoute route) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(z.im_double() == 0.0 && z.sign_re() > 0 && (Scalar(1) - z).sign_re() > 0,
          "g_identity requires 0 < z < 1");
  require_family_free_of_b(b, family);
  const int m = family.m_total();
  const Scalar fb = family.pochhammer_at(-b);
  const Scalar b1 = pochhammer(b + 1, m);
  require(!fb.is_zero() && !b1.is_zero(), "(f-b)_m and (b+1)_m must not vanish");
  const ShiftedFamily fam1 = family.shift(Scalar(1));
  const ComplexPoly qstar = checked_q(b + 1, c + 1, fam1);
  const Scalar wv = c - b - m;

  std::vector<Pair> lhs_pairs;
  for (std::size_t i = 0; i < family.size(); ++i)
    lhs_pairs.push_back({Scalar(1) - family.f()[i] - family.m()[i] + b, family.m()[i]});
  const Approx lhs = numeric(pow(z, b), w) * paired_series({Scalar(1) - c + b}, {}, z, lhs_pairs, w);

  const Scalar base = pochhammer(wv, m) * fam1.pochhammer() / (b1 * fb);
  const Scalar one_z = Scalar(1) - z;
  const Approx pre = numeric(pow(one_z, wv - 1), w);
  const Scalar bm = -b - m;
  if (route == ZetaRoute::Auto) route = ZetaRoute::Roots;
  Approx rhs;
  if (route == ZetaRoute::Polynomial) {
    // K prod (w-zeta*+n)/(w-zeta*) = base Q*(w+n).
    rhs = numeric(base, w) * pre * weighted_series({bm}, {}, one_z, compose_linear(qstar, wv, Scalar(1)), w);
  } else {
    const std::vector<Scalar> zeta = zeta_roots(b + 1, c + 1, fam1, w);
    Scalar ratio(1);
    std::vector<Pair> pairs;
    bool folded = false;
    for (const auto& zs : zeta) {
      require(!zs.is_zero(), "a zero of Q* vanishes");
      ratio *= (zs - wv) / zs;
      pairs.push_back({wv - zs, 1});
      const auto nearest = (wv - zs).near_integer();
      folded = folded || (nearest && *nearest == 0);
    }
    if (folded) {
      // K vanishes against a pole of the series; fold K into the terms as
      // prod (zeta* - w - n)/zeta*.
      ComplexPoly weight({Scalar(1)});
      for (const auto& zs : zeta) weight *= ComplexPoly::linear((zs - wv) / zs, Scalar(-1) / zs);
      rhs = numeric(base, w) * pre * weighted_series({bm}, {}, one_z, weight, w);
    } else {
      rhs = numeric(base * ratio, w) * pre * paired_series({bm}, {}, one_z, pairs, w);
    }
  }
  return make_report("g_identity", lhs, rhs, prec);
}

IdentityReport product_identity(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d,
                                const ShiftedFamily& family, int prec, ZetaRoute route) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  const int m = family.m_total();
  require((c - d - b - m).sign_re() > 0, "product_identity requires Re(c-d-b-m) > 0");
  require((a + b).sign_re() > 0, "product_identity requires Re(a+b) > 0");
  const ComplexPoly q = checked_q(b, c, family);
  const ShiftedFamily fam_a = family.shift(a);
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const std::vector<Scalar> fa(fam_a.f().begin(), fam_a.f().end());

  const Approx lhs = series(concat({d, b + a}, fam_a.shifted()), concat({c + a}, fa), Scalar(1), w);
  const Approx pref = gratio({c + a, b}, {c, b + a}, w) * exact(family.pochhammer() / fam_a.pochhammer());
  const Approx f1 = series(concat({d, b}, family.shifted()), concat({c}, f), Scalar(1), w);

  if (route == ZetaRoute::Auto) route = is_nonneg_integer(a) ? ZetaRoute::Polynomial : ZetaRoute::Roots;
  const std::vector<Scalar> top = {-a, c - b - m - d};
  const std::vector<Scalar> bottom = {c - d};
  Approx f2;
  if (route == ZetaRoute::Polynomial) {
    // (zeta-d+1)_n/(zeta-d)_n = Q(d-n)/Q(d).
    const Scalar qd = q(d);
    require(!qd.is_zero(), "Q(d) vanishes");
    f2 = weighted_series(top, bottom, Scalar(1), compose_linear(q, d, Scalar(-1)) * (Scalar(1) / qd), w);
  } else {
    std::vector<Pair> pairs;
    for (const auto& z : zeta_roots(b, c, family, w)) pairs.push_back({z - d, 1});
    f2 = paired_series(top, bottom, Scalar(1), pairs, w);
  }
  return make_report("product_identity", lhs, pref * f1 * f2, prec);
}

IdentityReport recurrence_step(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(p >= 2, "recurrence_step requires p >= 2");
  require((Scalar(p) - a - family.m_total() - 2).sign_re() > 0, "recurrence_step requires Re(p-a-m-2) > 0");
  const Scalar den = Scalar(p - 1) * (b + p - a - 1);
  require(!den.is_zero(), "(p-1)(b+p-a-1) must not vanish");
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  const ShiftedFamily fam1 = family.shift(Scalar(1));
  const std::vector<Scalar> f1(fam1.f().begin(), fam1.f().end());
  const Approx lhs = series(concat({a, b}, family.shifted()), concat({b + p}, f), Scalar(1), w);
  const Approx v1 = series(concat({a, b}, family.shifted()), concat({b + p - 1}, f), Scalar(1), w);
  const Approx v2 = series(concat({a + 1, b + 1}, family.shifted()), concat({b + p}, f), Scalar(1), w);
  const Approx v3 = series(concat({a + 1, b + 1}, fam1.shifted()), concat({b + p}, f1), Scalar(1), w);
  const Scalar ca = (b + p - 1) * (Scalar(p) - a - 1) / den;
  const Scalar cb = a * b / den;
  const Approx rhs = exact(ca) * v1 + exact(cb) * (v2 - exact(shift_ratio(family)) * v3);
  return make_report("recurrence_step", lhs, rhs, prec);
}

IdentityReport recurrence_chain(const Scalar& a, const Scalar& b, int p, const ShiftedFamily& family, int prec) {
  const int w = working_digits(prec);
  WorkingPrecision guard(w);
  require(p >= 1, "recurrence_chain requires p >= 1");
  require((Scalar(p) - a - family.m_total()).sign_re() > 0, "recurrence_chain requires Re(p-a-m) > 0");
  const Approx lhs = chain_value(a, b, p, family, w);
  return make_report("recurrence_chain", lhs, multi_rhs(a, {b}, {p}, family, w), prec);
}

IdentityReport contiguous_shift(int k, const ShiftedFamily& family) {
  require(k >= 0, "contiguous_shift requires k >= 0");
  const int prec = WorkingPrecision::current();
  const int w = working_digits(std::clamp(prec, kMinPrecision, kMaxPrecision));
  WorkingPrecision guard(w);
  const ShiftedFamily fam1 = family.shift(Scalar(1));
  const Approx lhs = terminating_c(k + 1, family, w);
  const Approx rhs = terminating_c(k, family, w) - exact(shift_ratio(family)) * terminating_c(k, fam1, w);
  return make_report("contiguous_shift", lhs, rhs, w - kGuard);
}

IdentityReport terminal_vanishing(const ShiftedFamily& family) {
  const int w = working_digits(std::clamp(WorkingPrecision::current(), kMinPrecision, kMaxPrecision));
  WorkingPrecision guard(w);
  const Approx lhs = terminating_c(family.m_total() + 1, family, w);
  return make_report("terminal_vanishing", lhs, exact(Scalar(0)), w - kGuard);
}

IdentityReport terminal_value(const ShiftedFamily& family) {
  const int w = working_digits(std::clamp(WorkingPrecision::current(), kMinPrecision, kMaxPrecision));
  WorkingPrecision guard(w);
  const int m = family.m_total();
  const Approx lhs = terminating_c(m, family, w);
  const Scalar sign = m % 2 == 0 ? Scalar(1) : Scalar(-1);
  const Scalar rhs = sign * Scalar(Rational(factorial(m))) / family.pochhammer();
  return make_report("terminal_value", lhs, numeric(rhs, w), w - kGuard);
}

IdentityReport pochhammer_reflection_check(const Scalar& b, const ShiftedFamily& family) {
  const int w = working_digits(std::clamp(WorkingPrecision::current(), kMinPrecision, kMaxPrecision));
  WorkingPrecision guard(w);
  const std::vector<Scalar> f(family.f().begin(), family.f().end());
  std::vector<Scalar> one_fm;
  std::vector<Scalar> one_fbm;
  for (std::size_t i = 0; i < f.size(); ++i) {
    one_fm.push_back(Scalar(1) - f[i] - family.m()[i]);
    one_fbm.push_back(Scalar(1) - f[i] + b - family.m()[i]);
  }
  const Scalar p1 = family.pochhammer_at(-b);
  const Scalar p2 = poch_family(one_fm, family.m());
  const Scalar p3 = family.pochhammer();
  const Scalar p4 = poch_family(one_fbm, family.m());
  for (const Scalar* x : {&p1, &p2, &p3, &p4})
    require(!x->is_zero(), "a Pochhammer product in the reflection check vanishes");
  const Scalar lhs = p1 * p2 / (p3 * p4);
  return make_report("pochhammer_reflection", numeric(lhs, w), exact(Scalar(1)), w - kGuard);
}

namespace {

ShiftedFamily counterexample_family() {
  return ShiftedFamily({Scalar(Rational(21, 5)), Scalar(Rational(-5, 3))}, {7, 8});
}

}  // namespace

IdentityReport karlsson_counterexample(int prec) {
  IdentityReport r = karlsson_unchecked(Scalar(-4), Scalar(Rational(33, 17)), counterexample_family(), prec);
  r.name = "karlsson_counterexample";
  return r;
}

IdentityReport counterexample_resolution(int prec) {
  IdentityReport r = minton_extended(4, Scalar(Rational(33, 17)), counterexample_family(), prec);
  r.name = "counterexample_resolution";
  return r;
}

}  // namespace hyperid
