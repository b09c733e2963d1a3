#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hyperid/errors.hpp"
#include "hyperid/series.hpp"
#include "hyperid/special.hpp"
#include "test_support.hpp"

namespace hyperid {
namespace {

using testing::close;
using testing::RationalDraw;

Scalar q(long p, long d = 1) { return Scalar(Rational(p) / Rational(d)); }

HypParams hyp(std::vector<Scalar> top, std::vector<Scalar> bottom, Scalar x = Scalar(1)) {
  return HypParams{std::move(top), std::move(bottom), std::move(x)};
}

TEST(Classify, Examples) {
  const Classification t = classify(hyp({q(-4), q(33, 17), q(7)}, {q(3), q(2)}));
  EXPECT_EQ(t.kind, SeriesKind::Terminating);
  EXPECT_EQ(t.k, 4);

  const Classification u = classify(hyp({q(1, 2), q(1, 3)}, {q(3)}));
  EXPECT_EQ(u.kind, SeriesKind::ConvergentUnit);
  EXPECT_EQ(u.excess, q(3) - q(1, 2) - q(1, 3));

  const Classification r = classify(hyp({q(1), q(-1), q(0)}, {q(3), q(-1)}));
  EXPECT_EQ(r.kind, SeriesKind::Terminating);
  EXPECT_EQ(r.k, 0);
}

TEST(Classify, RegionsAndErrors) {
  EXPECT_EQ(classify(hyp({q(1), q(1)}, {q(1, 2)})).kind, SeriesKind::Divergent);
  EXPECT_EQ(classify(hyp({q(1), q(1)}, {q(5, 2)}, q(-1))).kind, SeriesKind::Divergent);
  EXPECT_EQ(classify(hyp({q(1), q(1)}, {q(1, 2)}, q(1, 2))).kind, SeriesKind::ConvergentDisk);
  EXPECT_EQ(classify(hyp({q(1)}, {q(1, 2)}, q(30))).kind, SeriesKind::ConvergentDisk);
  EXPECT_EQ(classify(hyp({q(1), q(1), q(1)}, {q(2)}, q(1, 2))).kind, SeriesKind::Divergent);
  EXPECT_THROW(classify(hyp({q(1), q(2)}, {q(-3)})), InadmissibleBottom);
  EXPECT_THROW(classify(hyp({q(-5), q(2)}, {q(-3)})), InadmissibleBottom);
  EXPECT_NO_THROW(classify(hyp({q(-3), q(2)}, {q(-3)})));
  EXPECT_THROW(eval_series(hyp({q(1), q(1)}, {q(1, 2)}), 30), DivergentSeries);
}

TEST(EvalSeries, TerminatingExamples) {
  const SeriesResult a = eval_series(hyp({q(-1), q(1), q(3)}, {q(2), q(2)}), 50);
  EXPECT_EQ(a.value, q(1, 4));
  EXPECT_EQ(a.est_error, 0.0);
  EXPECT_EQ(a.method, SeriesMethod::ExactTerminating);
  EXPECT_EQ(eval_series(hyp({q(-1), q(3)}, {q(2)}), 50).value, q(-1, 2));
  EXPECT_EQ(eval_series(hyp({q(7, 3), q(0), q(-9, 2)}, {q(1, 5), q(11)}, q(5)), 50).value, q(1));
}

TEST(EvalRegularized, Examples) {
  EXPECT_EQ(eval_regularized(hyp({q(1), q(-1), q(0)}, {q(3), q(-1)}), 50).value, q(1));
  // 1 + (-2)(1)/(-3) + (-2)(-1)(1)(2)/((-3)(-2) 2!) = 2.
  EXPECT_EQ(eval_regularized(hyp({q(-2), q(1)}, {q(-3)}), 50).value, q(2));
  EXPECT_THROW(eval_regularized(hyp({q(1, 2), q(1)}, {q(3)}), 50), InadmissibleBottom);
}

TEST(EvalSeries, TerminatingIsPermutationInvariant) {
  RationalDraw draw(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<Scalar> top{q(-draw.integer(0, 8))};
    std::vector<Scalar> bottom;
    for (int i = 0; i < 3; ++i) top.emplace_back(draw.admissible());
    for (int i = 0; i < 3; ++i) bottom.emplace_back(draw.admissible());
    const Scalar x(draw.next());
    const Scalar base = eval_series(hyp(top, bottom, x), 30).value;
    std::rotate(top.begin(), top.begin() + 1, top.end());
    std::reverse(bottom.begin(), bottom.end());
    EXPECT_EQ(eval_series(hyp(top, bottom, x), 30).value, base);
  }
}

TEST(EvalSeries, ComplexTerminatingMatchesExactWithinEstimate) {
  const Scalar x = Scalar(BigComplex(Rational(1) / Rational(3), 40));
  const SeriesResult exact = eval_series(hyp({q(-6), q(7, 2)}, {q(5, 3)}, q(1, 3)), 30);
  const SeriesResult approx = eval_series(hyp({q(-6), q(7, 2)}, {q(5, 3)}, x), 30);
  EXPECT_GT(approx.est_error, 0.0);
  EXPECT_LE((approx.value - exact.value).magnitude(), 10 * approx.est_error);
}

TEST(EvalSeries, DiskMatchesClosedForms) {
  const int prec = 40;
  WorkingPrecision wp(prec);
  // 1F0(a;;x) = (1-x)^(-a).
  const SeriesResult binom = eval_series(hyp({q(5, 2)}, {}, q(1, 3)), prec);
  const BigComplex expected = pow(BigComplex(Rational(2) / Rational(3), prec), BigComplex(Rational(-5) / Rational(2), prec));
  EXPECT_TRUE(close(binom.value, Scalar(expected), 1e-38));
  EXPECT_EQ(binom.method, SeriesMethod::TruncatedDisk);
  // 0F0(;;x) = e^x with heavy cancellation at x = -30.
  const SeriesResult e = eval_series(hyp({}, {}, q(-30)), prec);
  const BigComplex ex = exp(BigComplex::from_long(-30, prec + 20));
  EXPECT_LE((e.value - Scalar(ex)).magnitude(), 1e-38 * ex.abs_double());
}

TEST(EvalSeries, DiskTermsMonotoneInRadius) {
  RationalDraw draw(5);
  for (int t = 0; t < 20; ++t) {
    const std::vector<Scalar> top{Scalar(draw.admissible()), Scalar(draw.admissible())};
    const std::vector<Scalar> bottom{Scalar(draw.admissible())};
    Rational x = draw.next(9, 10);
    if (x.is_zero() || abs(x) >= Rational(1)) continue;
    const int wide = eval_series(hyp(top, bottom, Scalar(x)), 30).terms_used;
    const int narrow = eval_series(hyp(top, bottom, Scalar(x / Rational(2))), 30).terms_used;
    EXPECT_LE(narrow, wide);
  }
}

// Random Gauss sums 2F1(a,b;c;1) with Re(c-a-b) >= 1.
std::vector<HypParams> gauss_samples(int count, unsigned long seed) {
  RationalDraw draw(seed);
  std::vector<HypParams> out;
  while (static_cast<int>(out.size()) < count) {
    const Rational a = draw.next(60, 10);
    const Rational b = draw.next(60, 10);
    const Rational c = a + b + Rational(draw.integer(10, 60)) / Rational(10);
    if (a.is_nonpositive_integer() || b.is_nonpositive_integer() || c.is_nonpositive_integer()) continue;
    out.push_back(hyp({Scalar(a), Scalar(b)}, {Scalar(c)}));
  }
  return out;
}

TEST(EvalSeries, GaussSummation) {
  const int prec = 50;
  for (const auto& p : gauss_samples(25, 17)) {
    const Scalar &a = p.top[0], &b = p.top[1], &c = p.bottom[0];
    WorkingPrecision wp(prec + 10);
    const std::vector<Scalar> num{c, c - a - b};
    const std::vector<Scalar> den{c - a, c - b};
    const Scalar expected = gamma_ratio(num, den);
    const SeriesResult r = eval_series(p, prec);
    EXPECT_EQ(r.method, SeriesMethod::AcceleratedUnit);
    EXPECT_TRUE(close(r.value, expected, std::pow(10.0, 5 - prec)))
        << a.to_string() << " " << b.to_string() << " " << c.to_string() << " -> " << r.value.to_string();
  }
}

TEST(EvalSeries, GaussSummationComplexParameters) {
  const int prec = 40;
  WorkingPrecision wp(prec + 10);
  const Scalar a(BigComplex(Rational(3) / Rational(4), Rational(2), prec + 10));
  const Scalar b = q(-7, 3);
  const Scalar c(BigComplex(Rational(5) / Rational(2), Rational(-1), prec + 10));
  const std::vector<Scalar> num{c, c - a - b};
  const std::vector<Scalar> den{c - a, c - b};
  const SeriesResult r = eval_series(hyp({a, b}, {c}), prec);
  EXPECT_TRUE(close(r.value, gamma_ratio(num, den), std::pow(10.0, 5 - prec))) << r.value.to_string();
}

TEST(EvalSeries, RhoAgreesWithLevin) {
  const int prec = 50;
  RationalDraw draw(29);
  int checked = 0;
  while (checked < 100) {
    std::vector<Scalar> top;
    std::vector<Scalar> bottom;
    const int p = draw.integer(2, 4);
    Scalar excess(0);
    for (int i = 0; i < p; ++i) top.emplace_back(draw.next(60, 10));
    for (int i = 0; i + 1 < p; ++i) bottom.emplace_back(draw.next(60, 10));
    for (const auto& x : bottom) excess += x;
    for (const auto& x : top) excess -= x;
    if (excess.re_double() < 1.0 || excess.re_double() > 8.0) continue;
    const HypParams params = hyp(top, bottom);
    Classification c;
    try {
      c = classify(params);
    } catch (const InadmissibleBottom&) {
      continue;
    }
    if (c.kind != SeriesKind::ConvergentUnit) continue;
    const SeriesResult rho = eval_series(params, prec);
    const SeriesResult levin = eval_unit_levin(params, prec);
    EXPECT_LE((rho.value - levin.value).magnitude(), 10 * rho.est_error) << checked;
    ++checked;
  }
}

TEST(WeightedSum, MatchesManualSum) {
  // sum_{n<=2} w_n (-2)_n (1/2)_n / ((3)_n n!) with w = (1, 2, 3).
  const Scalar got = weighted_terminating_sum(hyp({q(-2), q(1, 2)}, {q(3)}), 2, {q(1), q(2), q(3)}, 30).value;
  const Scalar expected = q(1) + q(2) * q(-2) * q(1, 2) / q(3) + q(3) * q(-2) * q(-1) * q(1, 2) * q(3, 2) / (q(3) * q(4) * q(2));
  EXPECT_EQ(got, expected);
}

}  // namespace
}  // namespace hyperid
