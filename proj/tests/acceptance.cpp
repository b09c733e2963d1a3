// Acceptance run: one PASS/FAIL line per criterion, exit status nonzero iff
// any criterion fails.

#include <chrono>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hyperid/cli.hpp"
#include "hyperid/combinatorics.hpp"
#include "hyperid/errors.hpp"
#include "hyperid/harness.hpp"
#include "hyperid/identities.hpp"
#include "hyperid/special.hpp"
#include "test_support.hpp"

using namespace hyperid;
using Json = nlohmann::json;

namespace {

// Pinned tolerances and sizes.
constexpr int kPrecision = 50;
constexpr std::uint64_t kSeed = 42;
constexpr int kExactCases = 200;
constexpr int kFloatCases = 100;
constexpr int kCrossCases = 100;
constexpr int kCombinatorialCases = 50;
constexpr double kFloatFactor = 10.0;            // rel_residual <= 10 * est_error
constexpr double kEstCeiling = 1e-45;            // an estimate this loose would be vacuous at 50 digits
constexpr double kMinExcess = 1.0;               // convergence margin of the default float sampler
constexpr double kExactBudgetSeconds = 300.0;    // criterion 1 runtime bound

const std::vector<std::string> kExactSuites = {
    "minton",      "minton_extended", "degenerate_sum",   "contiguous_shift", "pochhammer_reflection_check",
    "karlsson",    "karlsson_multi",  "gasper",           "mp2012_sum",       "q_summation",
    "product_identity", "recurrence_step"};
const std::vector<std::string> kFloatSuites = {"karlsson",         "gasper",     "mp2012_sum", "q_summation",
                                               "product_identity", "g_identity", "mp_transform"};
const std::vector<std::string> kCrossPairs = {"gasper->karlsson", "karlsson->minton", "karlsson_multi->karlsson",
                                              "q_summation<->mp2012_sum", "recurrence_chain->karlsson_multi"};

Scalar q(long p, long d = 1) { return Scalar(Rational(p) / Rational(d)); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

void print(int n, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << ": " << title;
  if (!o.pass) {
    std::cout << " [";
    for (std::size_t i = 0; i < o.notes.size() && i < 5; ++i) std::cout << (i ? "; " : "") << o.notes[i];
    if (o.notes.size() > 5) std::cout << "; +" << o.notes.size() - 5 << " more";
    std::cout << "]";
  }
  std::cout << "\n";
}

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{"hyperid"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.status = run_cli(argv, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const Json* find_suite(const Json& doc, const std::string& identity, const std::string& kind) {
  for (const auto& s : doc["suites"]) {
    if (s["identity"] == identity && s["kind"] == kind) return &s;
  }
  return nullptr;
}

void expect_exact_pair(Outcome& o, const std::string& label, const IdentityReport& r, const Scalar& value) {
  o.require(r.mode == Mode::Exact, label + " not exact");
  o.require(r.lhs == value && r.rhs == value,
            label + " gave " + r.lhs.to_string() + " / " + r.rhs.to_string() + ", want " + value.to_string());
}

Outcome criterion1(const Json& doc, double seconds) {
  Outcome o;
  for (const auto& name : kExactSuites) {
    const Json* s = find_suite(doc, name, "exact");
    if (!s) {
      o.require(false, name + " missing");
      continue;
    }
    const auto& sum = (*s)["summary"];
    o.require(sum["cases_run"] == kExactCases, name + " ran " + sum["cases_run"].dump());
    o.require(sum["cases_exact_pass"] == kExactCases, name + " exact passes " + sum["cases_exact_pass"].dump());
    for (const auto& c : (*s)["cases"]) {
      o.require(c["mode"] == "exact" && c["abs_residual"] == 0.0 && c["lhs"] == c["rhs"],
                name + " case " + c["index"].dump() + " not exactly zero");
    }
  }
  o.require(seconds < kExactBudgetSeconds, "suite run took " + std::to_string(seconds) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  WorkingPrecision guard(kPrecision);
  expect_exact_pair(o, "minton", minton(1, q(1), ShiftedFamily({q(2)}, {1}), kPrecision), q(1, 4));
  expect_exact_pair(o, "minton_extended", minton_extended(1, q(1), ShiftedFamily({q(3)}, {2}), kPrecision), q(1, 6));
  expect_exact_pair(o, "q_summation", q_summation(q(-1), q(1), q(4), ShiftedFamily({q(2)}, {1}), kPrecision),
                    q(5, 8));
  // Q(t) = 1 - t/4 has the single zero 4.
  const ShiftedFamily one({q(2)}, {1});
  o.require(c_coeff(one, 0) == q(1) && c_coeff(one, 1) == q(1, 2), "C_{k,1} coefficients");
  expect_exact_pair(o, "product_identity",
                    product_identity(q(1), q(1), q(4), q(-1), one, kPrecision, ZetaRoute::Auto), q(7, 15));
  expect_exact_pair(o, "degenerate_sum", degenerate_sum(q(1), q(1), 2, one, kPrecision), q(1));
  expect_exact_pair(o, "mp_transform", mp_transform(q(-1), q(1), q(4), one, q(1, 4), kPrecision, ZetaRoute::Auto),
                    q(29, 32));
  return o;
}

// Independent oracle: direct evaluation of the five terminating terms.
Scalar counterexample_sum() {
  const Scalar a = q(-4), b = q(33, 17), c = q(50, 17);
  const std::vector<Scalar> f{q(21, 5), q(-5, 3)};
  const std::vector<int> m{7, 8};
  Scalar total = q(0);
  for (std::size_t n = 0; n <= 4; ++n) {
    Scalar t = pochhammer(a, n) * pochhammer(b, n) / pochhammer(c, n) / Scalar(Rational(factorial(n)));
    for (std::size_t i = 0; i < f.size(); ++i) t = t * pochhammer(f[i] + Scalar(m[i]), n) / pochhammer(f[i], n);
    total = total + t;
  }
  return total;
}

Outcome criterion3() {
  Outcome o;
  const IdentityReport first = karlsson_counterexample(kPrecision);
  const IdentityReport second = karlsson_counterexample(100);
  o.require(first.mode == Mode::Exact, "not evaluated exactly");
  const Scalar diff = first.lhs - first.rhs;
  o.require(first.lhs.is_exact() && diff.is_exact() && !diff.is_zero(), "difference is not a nonzero rational");
  o.require(first.lhs == counterexample_sum(), "lhs disagrees with direct five-term sum");
  o.require(second.lhs - second.rhs == diff, "difference changes with precision");
  const CliRun a = cli({"counterexample", "--json"});
  const CliRun b = cli({"counterexample", "--json", "--precision", "100"});
  o.require(a.status == 0 && a.out == b.out, "CLI record not reproducible");
  o.require(Json::parse(a.out)["difference"] == diff.to_string(), "CLI difference disagrees with library");
  return o;
}

Outcome criterion4(const Json& doc) {
  Outcome o;
  o.require(doc["precision"] == kPrecision, "report precision");
  for (const auto& name : kFloatSuites) {
    const Json* s = find_suite(doc, name, "float");
    if (!s) {
      o.require(false, name + " missing");
      continue;
    }
    const auto& sum = (*s)["summary"];
    o.require(sum["cases_run"] == kFloatCases, name + " ran " + sum["cases_run"].dump());
    o.require(sum["cases_float_pass"] == kFloatCases, name + " float passes " + sum["cases_float_pass"].dump());
    o.require(sum["no_convergence"] == 0, name + " NoConvergence " + sum["no_convergence"].dump());
    for (const auto& c : (*s)["cases"]) {
      const double rel = c["rel_residual"];
      const double est = c["est_error"];
      o.require(c["mode"] == "float", name + " case " + c["index"].dump() + " not float");
      o.require(rel <= kFloatFactor * est, name + " case " + c["index"].dump() + " residual above 10 est");
      o.require(est <= kEstCeiling, name + " case " + c["index"].dump() + " est_error " + std::to_string(est));
    }
  }
  // The sampled unit-argument cases keep excess >= 1.
  for (const auto& name : {"karlsson", "mp2012_sum", "q_summation", "gasper"}) {
    SamplerSpec spec;
    spec.identity = name;
    spec.kind = SuiteKind::Float;
    spec.param_box = {-8.0, 8.0};
    spec.count = kFloatCases;
    spec.seed = kSeed;
    spec.convergence_margin = kMinExcess;
    for (const auto& c : sample(spec)) {
      const double s = testing::sampled_excess(c.inputs);
      o.require(s >= kMinExcess, std::string(name) + " excess " + std::to_string(s));
    }
  }
  return o;
}

Outcome criterion5(const Json& doc) {
  Outcome o;
  for (const auto& pair : kCrossPairs) {
    const Json* s = find_suite(doc, pair, "cross");
    if (!s) {
      o.require(false, pair + " missing");
      continue;
    }
    const auto& sum = (*s)["summary"];
    o.require(sum["cases_run"] == kCrossCases, pair + " ran " + sum["cases_run"].dump());
    o.require(sum["cases_failed"] == 0, pair + " disagreements " + sum["cases_failed"].dump());
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  WorkingPrecision guard(kPrecision);
  testing::RationalDraw draw(20260601);
  for (int i = 0; i < kCombinatorialCases; ++i) {
    const ShiftedFamily fam = draw.family(3, 4);
    for (int k = 0; k <= fam.m_total(); ++k) {
      o.require(c_coeff(fam, k) == c_coeff_by_series(fam, k), "C_{k,r} forms differ");
    }
  }
  for (int i = 0; i < kCombinatorialCases; ++i) {
    const int qn = draw.integer(2, 4);
    std::vector<Scalar> a, b;
    for (int j = 0; j + 1 < qn; ++j) a.emplace_back(draw.next());
    for (int j = 0; j < qn; ++j) b.emplace_back(draw.next());
    const NorlundContext ctx(a, b);
    o.require(norlund_g(ctx, 0) == q(1), "g_0 != 1");
    o.require(norlund_g(ctx, 1) == norlund_g1_closed(ctx), "g_1 nested sum differs from closed form");
    o.require(norlund_g(ctx, 2) == norlund_g2_closed(ctx), "g_2 nested sum differs from closed form");
  }
  for (int i = 0; i < kCombinatorialCases; ++i) {
    const ShiftedFamily fam = draw.family(3, 4);
    const int m = fam.m_total();
    Scalar sum = q(0);
    for (int n = 0; n <= m; ++n) {
      Scalar t = pochhammer(q(-m), n) / Scalar(Rational(factorial(n)));
      for (std::size_t j = 0; j < fam.f().size(); ++j) {
        t = t * pochhammer(fam.f()[j] + Scalar(fam.m()[j]), n) / pochhammer(fam.f()[j], n);
      }
      sum = sum + t;
    }
    const Scalar closed = Scalar(Rational(factorial(m))) * q(m % 2 == 0 ? 1 : -1) / fam.pochhammer();
    o.require(sum == closed, "terminal value differs");
    o.require(terminal_value(fam).holds(), "terminal_value report fails");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::string> args{"verify",    "--suite",     "all", "--seed",
                                      std::to_string(kSeed), "--precision", std::to_string(kPrecision),
                                      "--output", "json"};
  const auto start = std::chrono::steady_clock::now();
  const CliRun first = cli(args);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const CliRun second = cli(args);

  Json doc;
  bool parsed = true;
  try {
    doc = Json::parse(first.out);
  } catch (const std::exception&) {
    parsed = false;
  }

  std::vector<Outcome> results;
  auto guarded = [&](auto fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, std::string("exception: ") + e.what());
      return o;
    }
  };
  Outcome bad;
  bad.require(false, "verify did not produce a JSON report");

  const Outcome c1 = parsed ? guarded([&] { return criterion1(doc, seconds); }) : bad;
  const Outcome c2 = guarded(criterion2);
  const Outcome c3 = guarded(criterion3);
  const Outcome c4 = parsed ? guarded([&] { return criterion4(doc); }) : bad;
  const Outcome c5 = parsed ? guarded([&] { return criterion5(doc); }) : bad;
  const Outcome c6 = guarded(criterion6);
  Outcome c7;
  c7.require(first.status == 0 && second.status == 0, "verify exited nonzero");
  c7.require(!first.out.empty() && first.out == second.out, "reports differ between runs");

  print(1, "exact suites, 200 cases each, residual 0", c1);
  print(2, "worked fixed points", c2);
  print(3, "counterexample difference is a reproducible nonzero rational", c3);
  print(4, "float suites within 10x est_error, no NoConvergence", c4);
  print(5, "specialization cross-checks agree", c5);
  print(6, "combinatorial identities exact", c6);
  print(7, "verify --suite all is byte-identical across runs", c7);
  std::cout << "verify --suite all: " << seconds << " s\n";

  for (const Outcome* o : std::initializer_list<const Outcome*>{&c1, &c2, &c3, &c4, &c5, &c6, &c7}) {
    if (!o->pass) return 1;
  }
  return 0;
}
