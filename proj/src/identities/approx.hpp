#pragma once

#include <cmath>
#include <vector>

#include "hyperid/scalar.hpp"
#include "hyperid/series.hpp"
#include "hyperid/special.hpp"

namespace hyperid::detail {

// A value with a first-order absolute error bound; err == 0 for exact
// values and stays 0 under exact arithmetic.
struct Approx {
  Scalar v;
  double err = 0.0;
};

inline Approx exact(Scalar v) { return Approx{std::move(v), 0.0}; }

// Value computed at w digits by an operation accurate to a few ulps.
inline Approx numeric(Scalar v, int w) {
  const double err = v.is_exact() ? 0.0 : v.magnitude() * std::pow(10.0, 5 - w);
  return Approx{std::move(v), err};
}

inline Approx operator+(const Approx& a, const Approx& b) { return Approx{a.v + b.v, a.err + b.err}; }
inline Approx operator-(const Approx& a, const Approx& b) { return Approx{a.v - b.v, a.err + b.err}; }

inline Approx operator*(const Approx& a, const Approx& b) {
  return Approx{a.v * b.v, a.v.magnitude() * b.err + b.v.magnitude() * a.err + a.err * b.err};
}

inline Approx operator/(const Approx& a, const Approx& b) {
  const double bm = b.v.magnitude();
  const Scalar q = a.v / b.v;
  double err = 0.0;
  if (a.err > 0.0 || b.err > 0.0) err = q.magnitude() * ((a.v.is_zero() ? 0.0 : a.err / a.v.magnitude()) + b.err / bm) + a.err / bm;
  return Approx{q, err};
}

inline Approx series(std::vector<Scalar> top, std::vector<Scalar> bottom, Scalar x, int w) {
  const SeriesResult r = eval_series(HypParams{std::move(top), std::move(bottom), std::move(x)}, w);
  return Approx{r.value, r.est_error};
}

inline Approx gratio(const std::vector<Scalar>& num, const std::vector<Scalar>& den, int w) {
  return numeric(gamma_ratio(num, den), w);
}

}  // namespace hyperid::detail
