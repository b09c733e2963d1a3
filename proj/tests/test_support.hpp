#pragma once

#include <random>
#include <vector>

#include "hyperid/numerics.hpp"

namespace hyperid::testing {

// Small random rationals for property tests; deterministic per seed.
class RationalDraw {
 public:
  explicit RationalDraw(unsigned long seed) : rng_(seed) {}

  Rational next(long max_num = 40, long max_den = 12) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return Rational(num(rng_)) / Rational(den(rng_));
  }

  // Rational that is not a nonpositive integer.
  Rational admissible() {
    for (;;) {
      Rational r = next();
      if (!r.is_nonpositive_integer()) return r;
    }
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ShiftedFamily family(int max_r = 3, int max_m = 4) {
    const int r = integer(1, max_r);
    std::vector<Scalar> f;
    std::vector<int> m;
    for (int i = 0; i < r; ++i) {
      f.emplace_back(admissible());
      m.push_back(integer(1, max_m));
    }
    return ShiftedFamily(std::move(f), std::move(m));
  }

 private:
  std::mt19937_64 rng_;
};

// |a - b| <= tol * max(1, |b|), evaluated in double after subtraction at
// full precision.
inline bool close(const Scalar& a, const Scalar& b, double tol) {
  const double diff = (a - b).magnitude();
  const double scale = std::max(1.0, b.magnitude());
  return diff <= tol * scale;
}

}  // namespace hyperid::testing

#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace hyperid::testing {

// Convergence excess of the unit-argument series behind a sampled case:
// 1 - a - m for karlsson-type inputs, c - a - b - m when c is present.
inline double sampled_excess(const std::vector<std::pair<std::string, std::string>>& inputs) {
  std::map<std::string, std::string> in(inputs.begin(), inputs.end());
  std::string list = in.at("m");
  for (char& ch : list) {
    if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
  }
  std::istringstream items(list);
  int m = 0;
  for (int v; items >> v;) m += v;
  const auto value = [&](const char* key) { return Scalar::parse(in.at(key), 40).re_double(); };
  if (in.count("c")) return value("c") - value("a") - value("b") - m;
  return 1.0 - value("a") - m;
}

}  // namespace hyperid::testing
