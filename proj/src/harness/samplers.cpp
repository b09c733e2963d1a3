#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hyperid/errors.hpp"
#include "hyperid/harness.hpp"

namespace hyperid {

namespace {

constexpr long kLatticeNum = 40;
constexpr long kLatticeDen = 12;
constexpr long kQuantum = 1000;
constexpr int kInnerRetries = 64;
constexpr int kMaxAttempts = 1000;

std::string show(const Scalar& x) { return x.to_string(); }

std::string show(const std::vector<Scalar>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string();
  return out + "]";
}

std::string show(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "]";
}

// Parameter draws for one attempt. Exact draws come from the rational
// lattice, float draws from the box quantized to 1/1000.
class Draw {
 public:
  Draw(const SamplerSpec& spec, CounterRng rng, bool exact) : spec_(spec), rng_(rng), exact_(exact) {}

  bool exact() const { return exact_; }
  const SamplerSpec& spec() const { return spec_; }

  int integer(int lo, int hi) { return static_cast<int>(rng_.integer(lo, hi)); }

  Scalar lattice() {
    const double bound = std::max(std::abs(spec_.param_box.lo), std::abs(spec_.param_box.hi));
    for (int i = 0; i < kInnerRetries; ++i) {
      const Rational r = Rational(rng_.integer(-kLatticeNum, kLatticeNum)) / Rational(rng_.integer(1, kLatticeDen));
      if (std::abs(r.to_double()) <= bound) return Scalar(r);
    }
    return Scalar(0);
  }

  // Lattice value in (0, bound].
  Scalar lattice_positive() {
    for (int i = 0; i < kInnerRetries; ++i) {
      const Scalar x = lattice();
      if (x.sign_re() > 0) return x;
    }
    return Scalar(1);
  }

  Scalar quantized(double lo, double hi) {
    const double u = lo + (hi - lo) * rng_.unit();
    return Scalar(Rational(std::lround(u * kQuantum), kQuantum));
  }

  Scalar value() { return exact_ ? lattice() : quantized(spec_.param_box.lo, spec_.param_box.hi); }

  // A value that is not a nonpositive integer.
  Scalar admissible() {
    for (int i = 0; i < kInnerRetries; ++i) {
      Scalar x = value();
      if (!x.is_nonpositive_integer()) return x;
    }
    return Scalar(Rational(1, 2));
  }

  // A float parameter that keeps a series from terminating.
  Scalar non_integer() {
    for (int i = 0; i < kInnerRetries; ++i) {
      Scalar x = value();
      if (!x.near_integer()) return x;
    }
    return Scalar(Rational(1, 3));
  }

  // Convergence excess: margin plus a nonnegative draw.
  Scalar excess() {
    const Scalar margin(Rational(std::lround(spec_.convergence_margin * kQuantum), kQuantum));
    return exact_ ? margin + lattice_positive() : margin + quantized(0.0, 8.0);
  }

  ShiftedFamily family() {
    const int r = integer(1, spec_.r_max);
    std::vector<Scalar> f;
    std::vector<int> m;
    for (int i = 0; i < r; ++i) {
      f.push_back(admissible());
      m.push_back(integer(1, spec_.m_max));
    }
    return ShiftedFamily(std::move(f), std::move(m));
  }

 private:
  const SamplerSpec& spec_;
  CounterRng rng_;
  bool exact_;
};

class Inputs {
 public:
  Inputs& add(const std::string& name, const Scalar& x) { return put(name, show(x)); }
  Inputs& add(const std::string& name, int x) { return put(name, std::to_string(x)); }
  Inputs& add(const std::string& name, const std::vector<Scalar>& v) { return put(name, show(v)); }
  Inputs& add(const std::string& name, const std::vector<int>& v) { return put(name, show(v)); }
  Inputs& add(const ShiftedFamily& family) {
    put("f", show(std::vector<Scalar>(family.f().begin(), family.f().end())));
    return put("m", show(std::vector<int>(family.m().begin(), family.m().end())));
  }
  std::vector<std::pair<std::string, std::string>> take() { return std::move(items_); }

 private:
  Inputs& put(const std::string& name, std::string value) {
    items_.emplace_back(name, std::move(value));
    return *this;
  }
  std::vector<std::pair<std::string, std::string>> items_;
};

using Sampler = std::optional<SampledCase> (*)(Draw&);

SampledCase make_case(Inputs& in, std::function<IdentityReport(int)> run) {
  SampledCase c;
  c.inputs = in.take();
  c.run = std::move(run);
  return c;
}

// Terminating index k = k_min + [0, k_max].
int terminating_index(Draw& d, int k_min) { return std::max(0, k_min) + d.integer(0, d.spec().k_max); }

// --- exact-only identities ----------------------------------------------------------

std::optional<SampledCase> minton_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int k = terminating_index(d, fam.m_total());
  const Scalar b = d.lattice();
  Inputs in;
  in.add("k", k).add("b", b).add(fam);
  return make_case(in, [=](int prec) { return minton(k, b, fam, prec); });
}

std::optional<SampledCase> minton_extended_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int k = d.integer(0, fam.m_total() - 1);
  const Scalar b = d.lattice();
  Inputs in;
  in.add("k", k).add("b", b).add(fam);
  return make_case(in, [=](int prec) { return minton_extended(k, b, fam, prec); });
}

std::optional<SampledCase> degenerate_sum_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int p = d.integer(1, d.spec().p_max);
  const Scalar a = Scalar(fam.m_total() + 1 - p) + d.lattice_positive();
  const Scalar b = d.lattice();
  Inputs in;
  in.add("a", a).add("b", b).add("p", p).add(fam);
  return make_case(in, [=](int prec) { return degenerate_sum(a, b, p, fam, prec); });
}

std::optional<SampledCase> contiguous_shift_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int k = d.integer(0, d.spec().k_max);
  Inputs in;
  in.add("k", k).add(fam);
  return make_case(in, [=](int) { return contiguous_shift(k, fam); });
}

std::optional<SampledCase> reflection_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const Scalar b = d.lattice();
  Inputs in;
  in.add("b", b).add(fam);
  return make_case(in, [=](int) { return pochhammer_reflection_check(b, fam); });
}

std::optional<SampledCase> recurrence_step_exact(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int p = d.integer(2, std::max(2, d.spec().p_max));
  const Scalar a(-std::max(1, terminating_index(d, fam.m_total() + 3 - p)));
  const Scalar b = d.lattice();
  Inputs in;
  in.add("a", a).add("b", b).add("p", p).add(fam);
  return make_case(in, [=](int prec) { return recurrence_step(a, b, p, fam, prec); });
}

// --- identities with exact and float samplers ---------------------------------------

struct KarlssonDraw {
  ShiftedFamily fam;
  Scalar a;
  Scalar b;
};

// Karlsson's hypotheses: a = -k with k >= m, or Re(1-a-m) >= margin.
std::optional<KarlssonDraw> draw_karlsson(Draw& d) {
  ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  const Scalar a = d.exact() ? Scalar(-terminating_index(d, m)) : Scalar(1 - m) - d.excess();
  if (!d.exact() && a.near_integer()) return std::nullopt;
  const Scalar b = d.admissible();
  return KarlssonDraw{std::move(fam), a, b};
}

struct MultiDraw {
  std::vector<Scalar> b;
  std::vector<int> p;
  int total = 0;
};

MultiDraw draw_runs(Draw& d) {
  MultiDraw out;
  const int p_max = d.spec().p_max;
  const int p1 = d.integer(1, p_max);
  out.p.push_back(p1);
  out.b.push_back(d.admissible());
  if (p1 < p_max && d.integer(0, 1) == 1) {
    out.p.push_back(d.integer(1, p_max - p1));
    out.b.push_back(d.admissible());
  }
  for (int p : out.p) out.total += p;
  return out;
}

std::optional<SampledCase> karlsson_multi_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  const MultiDraw runs = draw_runs(d);
  // Re(P-a-m) >= margin.
  const Scalar a = d.exact() ? Scalar(-terminating_index(d, m - runs.total + 1))
                             : Scalar(runs.total - m) - d.excess();
  if (!d.exact() && a.near_integer()) return std::nullopt;
  Inputs in;
  in.add("a", a).add("b", runs.b).add("p", runs.p).add(fam);
  return make_case(in, [=](int prec) { return karlsson_multi(a, runs.b, runs.p, fam, prec); });
}

std::optional<SampledCase> gasper_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  Scalar a;
  Scalar b = d.admissible();
  Scalar c;
  if (d.exact()) {
    // c = b+1+j terminates the right side as well.
    const int j = d.integer(0, d.spec().k_max);
    c = b + 1 + j;
    a = Scalar(-terminating_index(d, m - j));
  } else {
    a = d.non_integer();
    c = a + b + m + d.excess();
  }
  Inputs in;
  in.add("a", a).add("b", b).add("c", c).add(fam);
  return make_case(in, [=](int prec) { return gasper(a, b, c, fam, prec); });
}

// (a, b, c) with Re(c-a-b-m) >= margin; a = -k in exact mode.
struct SumDraw {
  Scalar a;
  Scalar b;
  Scalar c;
};

std::optional<SumDraw> draw_sum(Draw& d, const ShiftedFamily& fam) {
  SumDraw s;
  s.a = d.exact() ? Scalar(-d.integer(0, d.spec().k_max)) : d.non_integer();
  s.b = d.admissible();
  s.c = s.a + s.b + fam.m_total() + d.excess();
  if (s.c.is_nonpositive_integer()) return std::nullopt;
  return s;
}

std::optional<SampledCase> mp2012_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const auto s = draw_sum(d, fam);
  if (!s) return std::nullopt;
  Inputs in;
  in.add("a", s->a).add("b", s->b).add("c", s->c).add(fam);
  return make_case(in, [=, s = *s](int prec) { return mp2012_sum(s.a, s.b, s.c, fam, prec); });
}

std::optional<SampledCase> q_summation_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const auto s = draw_sum(d, fam);
  if (!s) return std::nullopt;
  Inputs in;
  in.add("a", s->a).add("b", s->b).add("c", s->c).add(fam);
  return make_case(in, [=, s = *s](int prec) { return q_summation(s.a, s.b, s.c, fam, prec); });
}

std::optional<SampledCase> product_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  const Scalar b = d.admissible();
  Scalar a;
  Scalar dd;
  if (d.exact()) {
    // d = -k and a in N_0 terminate all three series; Re(a+b) > 0.
    dd = Scalar(-d.integer(0, d.spec().k_max));
    const long a0 = std::max(0L, static_cast<long>(std::floor(-b.re_double())) + 1);
    a = Scalar(a0 + d.integer(0, d.spec().k_max));
  } else {
    dd = d.non_integer();
    a = -b + d.excess();  // excess of the zeta factor is a+b
    if (a.near_integer()) return std::nullopt;
  }
  const Scalar c = dd + b + m + d.excess();
  if (c.is_nonpositive_integer()) return std::nullopt;
  Inputs in;
  in.add("a", a).add("b", b).add("c", c).add("d", dd).add(fam);
  return make_case(in, [=](int prec) { return product_identity(a, b, c, dd, fam, prec); });
}

std::optional<SampledCase> mp_transform_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  Scalar a;
  Scalar x;
  if (d.exact()) {
    a = Scalar(-d.integer(0, d.spec().k_max));
    const int den = d.integer(1, static_cast<int>(kLatticeDen));
    const int half = (den - 1) / 2;
    x = Scalar(Rational(d.integer(-half, half), den));
  } else {
    a = d.non_integer();
    x = Scalar(Rational(1, 3));
  }
  const Scalar b = d.admissible();
  const Scalar c = d.admissible();
  Inputs in;
  in.add("a", a).add("b", b).add("c", c).add("x", x).add(fam);
  return make_case(in, [=](int prec) { return mp_transform(a, b, c, fam, x, prec); });
}

std::optional<SampledCase> g_identity_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const Scalar b = d.non_integer();
  const Scalar c = d.admissible();
  const Scalar z(Rational(2, 5));
  Inputs in;
  in.add("b", b).add("c", c).add("z", z).add(fam);
  return make_case(in, [=](int prec) { return g_identity(b, c, fam, z, prec); });
}

std::optional<SampledCase> recurrence_chain_case(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  const int p = d.integer(1, d.spec().p_max);
  const Scalar a = d.exact() ? Scalar(-terminating_index(d, m - p + 1)) : Scalar(p - m) - d.excess();
  if (!d.exact() && a.near_integer()) return std::nullopt;
  const Scalar b = d.admissible();
  Inputs in;
  in.add("a", a).add("b", b).add("p", p).add(fam);
  return make_case(in, [=](int prec) { return recurrence_chain(a, b, p, fam, prec); });
}

std::optional<SampledCase> karlsson_case(Draw& d) {
  const auto k = draw_karlsson(d);
  if (!k) return std::nullopt;
  Inputs in;
  in.add("a", k->a).add("b", k->b).add(k->fam);
  return make_case(in, [k = *k](int prec) { return karlsson(k.a, k.b, k.fam, prec); });
}

// --- specialization pairs -----------------------------------------------------------

SampledCase pair_case(Inputs& in, std::function<IdentityReport(int)> run, std::function<IdentityReport(int)> partner,
                      bool compare_lhs = false) {
  SampledCase c = make_case(in, std::move(run));
  c.partner = std::move(partner);
  c.compare_lhs = compare_lhs;
  return c;
}

std::optional<SampledCase> gasper_to_karlsson(Draw& d) {
  const auto k = draw_karlsson(d);
  if (!k) return std::nullopt;
  Inputs in;
  in.add("a", k->a).add("b", k->b).add("c", k->b + 1).add(k->fam);
  return pair_case(
      in, [k = *k](int prec) { return gasper(k.a, k.b, k.b + 1, k.fam, prec); },
      [k = *k](int prec) { return karlsson(k.a, k.b, k.fam, prec); });
}

std::optional<SampledCase> karlsson_to_minton(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int k = terminating_index(d, fam.m_total());
  const Scalar b = d.lattice();
  Inputs in;
  in.add("a", Scalar(-k)).add("b", b).add(fam);
  return pair_case(
      in, [=](int prec) { return karlsson(Scalar(-k), b, fam, prec); },
      [=](int prec) { return minton(k, b, fam, prec); });
}

std::optional<SampledCase> multi_to_karlsson(Draw& d) {
  const auto k = draw_karlsson(d);
  if (!k) return std::nullopt;
  Inputs in;
  in.add("a", k->a).add("b", std::vector<Scalar>{k->b}).add("p", std::vector<int>{1}).add(k->fam);
  return pair_case(
      in, [k = *k](int prec) { return karlsson_multi(k.a, {k.b}, {1}, k.fam, prec); },
      [k = *k](int prec) { return karlsson(k.a, k.b, k.fam, prec); });
}

std::optional<SampledCase> q_to_mp2012(Draw& d) {
  const ShiftedFamily fam = d.family();
  const auto s = draw_sum(d, fam);
  if (!s) return std::nullopt;
  Inputs in;
  in.add("a", s->a).add("b", s->b).add("c", s->c).add(fam);
  return pair_case(
      in, [=, s = *s](int prec) { return q_summation(s.a, s.b, s.c, fam, prec); },
      [=, s = *s](int prec) { return mp2012_sum(s.a, s.b, s.c, fam, prec); });
}

std::optional<SampledCase> chain_to_multi(Draw& d) {
  const ShiftedFamily fam = d.family();
  const int m = fam.m_total();
  const int p = d.integer(1, d.spec().p_max);
  const Scalar a = d.exact() ? Scalar(-terminating_index(d, m - p + 1)) : Scalar(p - m) - d.excess();
  if (!d.exact() && a.near_integer()) return std::nullopt;
  const Scalar b = d.admissible();
  Inputs in;
  in.add("a", a).add("b", b).add("p", p).add(fam);
  return pair_case(
      in, [=](int prec) { return recurrence_chain(a, b, p, fam, prec); },
      [=](int prec) { return karlsson_multi(a, {b}, {p}, fam, prec); }, true);
}

}  // namespace

namespace {

struct Entry {
  Sampler exact = nullptr;
  Sampler floating = nullptr;
};

const std::vector<std::pair<std::string, Entry>>& registry() {
  static const std::vector<std::pair<std::string, Entry>> table = {
      {"minton", {minton_exact, nullptr}},
      {"minton_extended", {minton_extended_exact, nullptr}},
      {"karlsson", {karlsson_case, karlsson_case}},
      {"karlsson_multi", {karlsson_multi_case, nullptr}},
      {"gasper", {gasper_case, gasper_case}},
      {"degenerate_sum", {degenerate_sum_exact, nullptr}},
      {"mp2012_sum", {mp2012_case, mp2012_case}},
      {"mp_transform", {mp_transform_case, mp_transform_case}},
      {"q_summation", {q_summation_case, q_summation_case}},
      {"g_identity", {nullptr, g_identity_case}},
      {"product_identity", {product_case, product_case}},
      {"recurrence_step", {recurrence_step_exact, nullptr}},
      {"recurrence_chain", {recurrence_chain_case, nullptr}},
      {"contiguous_shift", {contiguous_shift_exact, nullptr}},
      {"pochhammer_reflection_check", {reflection_exact, nullptr}},
  };
  return table;
}

const Entry* find_entry(const std::string& name) {
  for (const auto& [n, e] : registry())
    if (n == name) return &e;
  return nullptr;
}

struct PairEntry {
  const char* name;
  Sampler sampler;
  bool exact_only;
};

// Even case indices draw exact (terminating) parameters, odd ones float.
const std::vector<PairEntry>& pair_registry() {
  static const std::vector<PairEntry> table = {
      {"gasper->karlsson", gasper_to_karlsson, false},
      {"karlsson->minton", karlsson_to_minton, true},
      {"karlsson_multi->karlsson", multi_to_karlsson, false},
      {"q_summation<->mp2012_sum", q_to_mp2012, false},
      {"recurrence_chain->karlsson_multi", chain_to_multi, false},
  };
  return table;
}

}  // namespace

std::vector<std::string> registered_identities() {
  std::vector<std::string> out;
  for (const auto& [n, e] : registry()) out.push_back(n);
  return out;
}

std::vector<std::string> exact_identities() {
  std::vector<std::string> out;
  for (const auto& [n, e] : registry())
    if (e.exact != nullptr) out.push_back(n);
  return out;
}

std::vector<std::string> float_identities() {
  std::vector<std::string> out;
  for (const auto& [n, e] : registry())
    if (e.floating != nullptr) out.push_back(n);
  return out;
}

std::vector<std::string> cross_check_pairs() {
  std::vector<std::string> out;
  for (const auto& e : pair_registry()) out.emplace_back(e.name);
  return out;
}

std::string to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::Exact:
      return "exact";
    case SuiteKind::Float:
      return "float";
    case SuiteKind::CrossCheck:
      return "cross";
    case SuiteKind::Fixed:
      return "fixed";
  }
  return "unknown";
}

std::string SamplerSpec::suite_name() const { return identity + "/" + to_string(kind); }

std::optional<SampledCase> draw_case(const SamplerSpec& spec, int index, int attempt) {
  const CounterRng rng(CounterRng::derive(spec.seed, spec.suite_name(), static_cast<std::uint64_t>(index),
                                          static_cast<std::uint64_t>(attempt)));
  Sampler sampler = nullptr;
  bool exact = spec.kind == SuiteKind::Exact;
  if (spec.kind == SuiteKind::CrossCheck) {
    for (const auto& e : pair_registry()) {
      if (spec.identity == e.name) {
        sampler = e.sampler;
        exact = e.exact_only || index % 2 == 0;
      }
    }
    if (sampler == nullptr) throw PreconditionViolation("unregistered specialization pair: " + spec.identity);
  } else {
    const Entry* e = find_entry(spec.identity);
    if (e == nullptr) throw PreconditionViolation("unknown identity: " + spec.identity);
    sampler = spec.kind == SuiteKind::Exact ? e->exact : spec.kind == SuiteKind::Float ? e->floating : nullptr;
    if (sampler == nullptr) {
      throw PreconditionViolation("no " + to_string(spec.kind) + " sampler for " + spec.identity);
    }
  }
  Draw draw(spec, rng, exact);
  try {
    return sampler(draw);
  } catch (const PreconditionViolation&) {
    // e.g. a family component landing on a nonpositive integer after a shift
    return std::nullopt;
  }
}

std::vector<SampledCase> sample(const SamplerSpec& spec) {
  std::vector<SampledCase> out;
  for (int i = 0; i < spec.count; ++i) {
    std::optional<SampledCase> c;
    for (int attempt = 0; attempt < kMaxAttempts && !c; ++attempt) c = draw_case(spec, i, attempt);
    if (!c) throw SamplingExhausted("no admissible draw for case " + std::to_string(i) + " of " + spec.suite_name());
    out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace hyperid
