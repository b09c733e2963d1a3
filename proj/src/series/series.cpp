#include "hyperid/series.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hyperid/errors.hpp"

namespace hyperid {

namespace {

constexpr int kMaxDigits = 300;
constexpr int kUnitTermBudget = 4096;
constexpr int kUnitColumnBudget = 512;
constexpr int kDiskTermBudget = 65536;
constexpr int kGuardDigits = 10;

void check_prec(int prec) {
  if (prec < BigComplex::kMinDigits || prec > kMaxDigits) {
    throw std::invalid_argument("series precision must lie in [16, 300] digits");
  }
}

bool all_exact(const HypParams& p) {
  auto exact = [](const Scalar& s) { return s.is_exact(); };
  return std::all_of(p.top.begin(), p.top.end(), exact) && std::all_of(p.bottom.begin(), p.bottom.end(), exact) &&
         p.x.is_exact();
}

// Index j at which the factor (a + j) of (a)_n vanishes, if any.
std::optional<int> zero_index(const Scalar& a) {
  if (!a.is_nonpositive_integer()) return std::nullopt;
  return static_cast<int>(-*a.near_integer());
}

double max_magnitude(const HypParams& p) {
  double m = 0.0;
  for (const auto& a : p.top) m = std::max(m, a.magnitude());
  for (const auto& b : p.bottom) m = std::max(m, b.magnitude());
  return m;
}

bool is_unit(const Scalar& x) {
  if (x.is_exact()) return x.exact() == Rational(1);
  return (x - Scalar(1)).is_zero();
}

double pow10(int e) { return std::pow(10.0, e); }

// --- terminating sums ---------------------------------------------------------

struct Factors {
  std::vector<std::optional<int>> top_zero;
  std::vector<std::optional<int>> bottom_zero;
};

Factors factor_zeros(const HypParams& p) {
  Factors f;
  for (const auto& a : p.top) f.top_zero.push_back(zero_index(a));
  for (const auto& b : p.bottom) f.bottom_zero.push_back(zero_index(b));
  return f;
}

// Sum over n = 0..k of w_n (top)_n / ((bottom)_n n!) x^n with explicit
// products: a vanishing numerator factor zeroes every later term; a
// vanishing denominator factor is only tolerated behind one.
template <class T, class Make>
T explicit_sum(const HypParams& p, int k, const std::vector<Scalar>* weights, Make make, double* max_term_out,
               double (*mag)(const T&)) {
  const Factors zeros = factor_zeros(p);
  std::vector<T> top;
  std::vector<T> bottom;
  for (const auto& a : p.top) top.push_back(make(a));
  for (const auto& b : p.bottom) bottom.push_back(make(b));
  const T x = make(p.x);

  T num = make(Scalar(1));
  T den = make(Scalar(1));
  bool num_zero = false;
  T sum = make(Scalar(0));
  double max_term = 0.0;
  for (int n = 0; n <= k; ++n) {
    if (n > 0) {
      const int j = n - 1;
      for (std::size_t i = 0; i < top.size(); ++i) {
        if (zeros.top_zero[i] && *zeros.top_zero[i] == j) {
          num_zero = true;
        } else {
          num *= top[i] + make(Scalar(j));
        }
      }
      for (std::size_t i = 0; i < bottom.size(); ++i) {
        if (zeros.bottom_zero[i] && *zeros.bottom_zero[i] == j) {
          if (!num_zero) throw InadmissibleBottom("bottom parameter pole is not dominated by a top zero");
        } else {
          den *= bottom[i] + make(Scalar(j));
        }
      }
      num *= x;
      den *= make(Scalar(n));
    }
    if (num_zero) break;
    T term = num / den;
    if (weights != nullptr) term *= make((*weights)[static_cast<std::size_t>(n)]);
    max_term = std::max(max_term, mag(term));
    sum += term;
  }
  if (max_term_out != nullptr) *max_term_out = max_term;
  return sum;
}

double rational_mag(const Rational& r) { return std::fabs(r.to_double()); }
double complex_mag(const BigComplex& z) { return z.abs_double(); }

SeriesResult terminating(const HypParams& p, int k, int prec, const std::vector<Scalar>* weights) {
  bool exact = all_exact(p);
  if (weights != nullptr) {
    exact = exact && std::all_of(weights->begin(), weights->end(), [](const Scalar& s) { return s.is_exact(); });
  }
  if (exact) {
    const Rational value = explicit_sum<Rational>(
        p, k, weights, [](const Scalar& s) { return s.exact(); }, nullptr, &rational_mag);
    return SeriesResult{Scalar(value), 0.0, k + 1, SeriesMethod::ExactTerminating};
  }
  // Raise the working precision until cancellation is covered.
  int w = prec + kGuardDigits;
  for (;;) {
    double max_term = 0.0;
    const BigComplex value = explicit_sum<BigComplex>(
        p, k, weights, [w](const Scalar& s) { return s.to_complex(w); }, &max_term, &complex_mag);
    const double size = value.abs_double();
    const double lost = (size > 0.0 && max_term > 0.0) ? std::max(0.0, std::log10(max_term / size)) : 0.0;
    if (lost + prec + 2 <= w || w > 4 * kMaxDigits) {
      const double est = (k + 1) * max_term * pow10(2 - w);
      return SeriesResult{Scalar(value.with_digits(prec)), est, k + 1, SeriesMethod::ExactTerminating};
    }
    w = prec + kGuardDigits + static_cast<int>(std::ceil(lost));
  }
}

// --- |x| < 1 and entire series -----------------------------------------------------

SeriesResult disk(const HypParams& p, int prec) {
  if (p.x.is_zero()) return SeriesResult{Scalar(1), 0.0, 1, SeriesMethod::TruncatedDisk};
  const bool unit_radius = p.top.size() == p.bottom.size() + 1;
  const double xmag = p.x.magnitude();
  const int n_min = static_cast<int>(std::ceil(2.0 * (max_magnitude(p) + xmag))) + 2;
  int w = prec + kGuardDigits;
  for (;;) {
    std::vector<BigComplex> top;
    std::vector<BigComplex> bottom;
    for (const auto& a : p.top) top.push_back(a.to_complex(w));
    for (const auto& b : p.bottom) bottom.push_back(b.to_complex(w));
    const BigComplex x = p.x.to_complex(w);

    BigComplex term = BigComplex::from_long(1, w);
    BigComplex sum = term;
    double max_term = 1.0;
    double prev_mag = 1.0;
    double tail = 0.0;
    int n = 0;
    for (;; ++n) {
      if (n >= kDiskTermBudget) throw NoConvergence("truncated series exceeded its term budget");
      BigComplex ratio = x / BigComplex::from_long(n + 1, w);
      for (const auto& a : top) ratio *= a + BigComplex::from_long(n, w);
      for (const auto& b : bottom) ratio /= b + BigComplex::from_long(n, w);
      term *= ratio;
      sum += term;
      const double mag = term.abs_double();
      max_term = std::max(max_term, mag);
      const double r = std::max(prev_mag > 0.0 ? mag / prev_mag : 0.0, unit_radius ? xmag : 0.0);
      prev_mag = mag;
      if (n + 1 >= n_min && r < 1.0) {
        tail = mag * r / (1.0 - r);
        const double target = std::max(pow10(-(prec + 2)) * sum.abs_double(), pow10(2 - w) * max_term);
        if (tail <= target) break;
      }
    }
    const double size = sum.abs_double();
    const double lost = size > 0.0 ? std::max(0.0, std::log10(max_term / size)) : 0.0;
    if (lost + prec + 2 <= w || w > 4 * kMaxDigits) {
      const double est = tail + (n + 2) * max_term * pow10(2 - w);
      return SeriesResult{Scalar(sum.with_digits(prec)), est, n + 2, SeriesMethod::TruncatedDisk};
    }
    w = prec + kGuardDigits + static_cast<int>(std::ceil(lost));
  }
}

// --- x = 1 ----------------------------------------------------------------------

struct UnitSetup {
  int w;
  int n0;
};

// Partial sums S_0 .. S_{count-1} at w digits.
class PartialSums {
 public:
  PartialSums(const HypParams& p, int w) : w_(w) {
    for (const auto& a : p.top) top_.push_back(a.to_complex(w));
    for (const auto& b : p.bottom) bottom_.push_back(b.to_complex(w));
    term_ = BigComplex::from_long(1, w);
    sums_.push_back(term_);
    terms_.push_back(term_);
  }

  const BigComplex& sum(int n) {
    extend(n);
    return sums_[static_cast<std::size_t>(n)];
  }
  const BigComplex& term(int n) {
    extend(n);
    return terms_[static_cast<std::size_t>(n)];
  }
  int count() const { return static_cast<int>(sums_.size()); }

 private:
  void extend(int n) {
    while (count() <= n) {
      const long j = count() - 1;
      BigComplex ratio = BigComplex::from_long(1, w_) / BigComplex::from_long(j + 1, w_);
      for (const auto& a : top_) ratio *= a + BigComplex::from_long(j, w_);
      for (const auto& b : bottom_) ratio /= b + BigComplex::from_long(j, w_);
      term_ *= ratio;
      terms_.push_back(term_);
      sums_.push_back(sums_.back() + term_);
    }
  }

  int w_;
  std::vector<BigComplex> top_;
  std::vector<BigComplex> bottom_;
  BigComplex term_;
  std::vector<BigComplex> terms_;
  std::vector<BigComplex> sums_;
};

UnitSetup unit_setup(const HypParams& p, int prec, int attempt) {
  int n0 = static_cast<int>(std::ceil(2.0 * max_magnitude(p))) + 8;
  int w = 2 * prec + 20;
  if (attempt > 0) {
    n0 = 2 * n0 + 8;
    w = 3 * prec + 40;
  }
  return UnitSetup{w, std::min(n0, kUnitTermBudget / 2)};
}

// Tracks the last three extrapolants and reports convergence once the
// spread has been below target twice in a row.
class Stabilizer {
 public:
  // `scale` bounds the absolute error target from below for sums that
  // vanish or nearly do.
  Stabilizer(int prec, int w, double scale) : prec_(prec), w_(w), floor_(pow10(-prec) * scale) {}

  bool push(const BigComplex& estimate) {
    history_.push_back(estimate);
    if (history_.size() < 3) return false;
    const std::size_t n = history_.size();
    spread_ = std::max((history_[n - 1] - history_[n - 2]).abs_double(),
                       (history_[n - 2] - history_[n - 3]).abs_double());
    const double target = pow10(-(prec_ + 1)) * std::max(estimate.abs_double(), floor_) + pow10(5 - w_);
    hits_ = spread_ <= target ? hits_ + 1 : 0;
    return hits_ >= 2;
  }

  const BigComplex& value() const { return history_.back(); }
  double est_error() const { return spread_ + pow10(-prec_) * std::max(history_.back().abs_double(), floor_); }

 private:
  int prec_;
  int w_;
  double floor_;
  std::vector<BigComplex> history_;
  double spread_ = 0.0;
  int hits_ = 0;
};

std::optional<SeriesResult> rho_attempt(const HypParams& p, const Scalar& excess, int prec, const UnitSetup& setup) {
  PartialSums sums(p, setup.w);
  const BigComplex theta = excess.to_complex(setup.w);
  Stabilizer stab(prec, setup.w, sums.sum(setup.n0).abs_double());
  std::vector<BigComplex> prev;
  for (int n = setup.n0; n < kUnitTermBudget; ++n) {
    std::vector<BigComplex> diag;
    diag.reserve(prev.size() + 1);
    diag.push_back(sums.sum(n));
    for (std::size_t k = 1; k <= prev.size(); ++k) {
      const BigComplex diff = diag[k - 1] - prev[k - 1];
      // Column k-1 has stopped moving; the table is cut there.
      if (diff.is_zero()) break;
      const BigComplex numerator = theta + BigComplex::from_long(static_cast<long>(k) - 1, setup.w);
      BigComplex entry = numerator / diff;
      if (k >= 2) entry += prev[k - 2];
      diag.push_back(std::move(entry));
    }
    const std::size_t top = diag.size() - 1;
    prev = std::move(diag);
    if (prev.size() > static_cast<std::size_t>(kUnitColumnBudget)) return std::nullopt;
    if (n - setup.n0 < 8) continue;
    if (stab.push(prev[top - top % 2])) {
      return SeriesResult{Scalar(stab.value().with_digits(prec)), stab.est_error(), n + 1,
                          SeriesMethod::AcceleratedUnit};
    }
  }
  return std::nullopt;
}

std::optional<SeriesResult> levin_attempt(const HypParams& p, int prec, const UnitSetup& setup) {
  PartialSums sums(p, setup.w);
  Stabilizer stab(prec, setup.w, sums.sum(setup.n0).abs_double());
  const int n0 = setup.n0;
  for (int k = 4; k <= kUnitColumnBudget && n0 + k < kUnitTermBudget; ++k) {
    BigComplex num = BigComplex::zero(setup.w);
    BigComplex den = BigComplex::zero(setup.w);
    mpz_class binom = 1;
    for (int j = 0; j <= k; ++j) {
      // (-1)^j C(k,j) ((n0+j+1)/(n0+k+1))^(k-1), exact.
      mpz_class up;
      mpz_class down;
      mpz_ui_pow_ui(up.get_mpz_t(), static_cast<unsigned long>(n0 + j + 1), static_cast<unsigned long>(k - 1));
      mpz_ui_pow_ui(down.get_mpz_t(), static_cast<unsigned long>(n0 + k + 1), static_cast<unsigned long>(k - 1));
      Rational c(binom * up, down);
      if (j % 2 == 1) c = -c;
      const BigComplex omega = BigComplex::from_long(n0 + j + 1, setup.w) * sums.term(n0 + j);
      const BigComplex weight = BigComplex(c, setup.w) / omega;
      num += weight * sums.sum(n0 + j);
      den += weight;
      binom = binom * (k - j) / (j + 1);
    }
    if (den.is_zero()) return std::nullopt;
    if (stab.push(num / den)) {
      return SeriesResult{Scalar(stab.value().with_digits(prec)), stab.est_error(), n0 + k + 1,
                          SeriesMethod::AcceleratedUnit};
    }
  }
  return std::nullopt;
}

template <class Attempt>
SeriesResult unit(const HypParams& p, int prec, Attempt attempt) {
  for (int a = 0; a < 2; ++a) {
    if (auto result = attempt(unit_setup(p, prec, a))) return *result;
  }
  throw NoConvergence("unit-argument extrapolation did not stabilize");
}

}  // namespace

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Terminating: return "terminating";
    case SeriesKind::ConvergentUnit: return "convergent-unit";
    case SeriesKind::ConvergentDisk: return "convergent-disk";
    case SeriesKind::Divergent: return "divergent";
  }
  return "unknown";
}

std::string to_string(SeriesMethod method) {
  switch (method) {
    case SeriesMethod::ExactTerminating: return "exact-terminating";
    case SeriesMethod::TruncatedDisk: return "truncated-disk";
    case SeriesMethod::AcceleratedUnit: return "accelerated-unit";
  }
  return "unknown";
}

Classification classify(const HypParams& params) {
  std::optional<int> k;
  for (const auto& a : params.top) {
    if (auto z = zero_index(a)) k = k ? std::min(*k, *z) : *z;
  }
  for (const auto& b : params.bottom) {
    if (auto z = zero_index(b); z && (!k || *k > *z)) {
      throw InadmissibleBottom("bottom parameter " + b.to_string() + " is a pole not dominated by a top parameter");
    }
  }
  Classification c;
  if (k) {
    c.kind = SeriesKind::Terminating;
    c.k = *k;
    return c;
  }
  const std::size_t p = params.top.size();
  const std::size_t q = params.bottom.size();
  if (p <= q) {
    c.kind = SeriesKind::ConvergentDisk;
    return c;
  }
  if (p == q + 1) {
    if (is_unit(params.x)) {
      Scalar s(0);
      for (const auto& b : params.bottom) s += b;
      for (const auto& a : params.top) s -= a;
      if (s.sign_re() > 0) {
        c.kind = SeriesKind::ConvergentUnit;
        c.excess = s;
        return c;
      }
    } else if (params.x.magnitude() < 1.0) {
      c.kind = SeriesKind::ConvergentDisk;
      return c;
    }
  }
  c.kind = SeriesKind::Divergent;
  return c;
}

SeriesResult eval_series(const HypParams& params, int prec) {
  check_prec(prec);
  const Classification c = classify(params);
  switch (c.kind) {
    case SeriesKind::Terminating:
      return terminating(params, c.k, prec, nullptr);
    case SeriesKind::ConvergentDisk:
      return disk(params, prec);
    case SeriesKind::ConvergentUnit:
      return unit(params, prec, [&](const UnitSetup& s) { return rho_attempt(params, c.excess, prec, s); });
    case SeriesKind::Divergent:
      break;
  }
  throw DivergentSeries("series diverges at the given argument");
}

SeriesResult eval_regularized(const HypParams& params, int prec) {
  check_prec(prec);
  const Classification c = classify(params);
  if (c.kind != SeriesKind::Terminating) throw InadmissibleBottom("regularized evaluation needs a terminating series");
  return terminating(params, c.k, prec, nullptr);
}

SeriesResult eval_unit_levin(const HypParams& params, int prec) {
  check_prec(prec);
  const Classification c = classify(params);
  if (c.kind != SeriesKind::ConvergentUnit) throw PreconditionViolation("Levin evaluation needs a convergent unit-argument series");
  return unit(params, prec, [&](const UnitSetup& s) { return levin_attempt(params, prec, s); });
}

SeriesResult weighted_terminating_sum(const HypParams& params, int k, const std::vector<Scalar>& weights, int prec) {
  check_prec(prec);
  if (k < 0 || weights.size() < static_cast<std::size_t>(k + 1)) {
    throw std::invalid_argument("weighted sum needs k+1 weights");
  }
  return terminating(params, k, prec, &weights);
}

}  // namespace hyperid
