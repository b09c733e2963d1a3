#include <gtest/gtest.h>

#include <map>

#include "hyperid/errors.hpp"
#include "hyperid/harness.hpp"
#include "test_support.hpp"

using namespace hyperid;

namespace {

SamplerSpec spec_for(const std::string& identity, SuiteKind kind, int count) {
  SamplerSpec s;
  s.identity = identity;
  s.kind = kind;
  s.count = count;
  if (kind != SuiteKind::Exact) s.param_box = {-8.0, 8.0};
  return s;
}

std::map<std::string, std::string> as_map(const SampledCase& c) { return {c.inputs.begin(), c.inputs.end()}; }

int total_m(const std::string& list) {
  int m = 0;
  std::string digits;
  for (char ch : list + ",") {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
    } else if (!digits.empty()) {
      m += std::stoi(digits);
      digits.clear();
    }
  }
  return m;
}

}  // namespace

TEST(CounterRng, MatchesSplitMix64Reference) {
  // SplitMix64 seeded with 0: first outputs of the reference generator.
  CounterRng rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
  EXPECT_EQ(rng.counter(), 3u);
}

TEST(CounterRng, BoundedDraws) {
  CounterRng rng(CounterRng::derive(7, "suite", 3, 0));
  for (int i = 0; i < 2000; ++i) {
    const long v = rng.integer(-3, 5);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 5);
    const double u = rng.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(CounterRng::derive(7, "suite", 3, 0), CounterRng::derive(7, "suite", 3, 1));
  EXPECT_NE(CounterRng::derive(7, "suite", 3, 0), CounterRng::derive(7, "other", 3, 0));
}

TEST(Sampling, FixedSeedGivesIdenticalStreams) {
  for (const auto& name : exact_identities()) {
    const auto spec = spec_for(name, SuiteKind::Exact, 30);
    const auto first = sample(spec);
    const auto second = sample(spec);
    ASSERT_EQ(first.size(), 30u);
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].inputs, second[i].inputs) << name;
  }
}

TEST(Sampling, SeedChangesStream) {
  auto spec = spec_for("minton", SuiteKind::Exact, 20);
  const auto first = sample(spec);
  spec.seed = 43;
  const auto second = sample(spec);
  int differing = 0;
  for (std::size_t i = 0; i < first.size(); ++i) differing += first[i].inputs != second[i].inputs;
  EXPECT_GT(differing, 10);
}

TEST(Sampling, ConvergenceMarginHolds) {
  for (const char* name : {"karlsson", "gasper", "mp2012_sum", "q_summation"}) {
    for (double margin : {1.0, 2.5}) {
      auto spec = spec_for(name, SuiteKind::Float, 100);
      spec.convergence_margin = margin;
      for (const auto& c : sample(spec)) EXPECT_GE(hyperid::testing::sampled_excess(c.inputs), margin - 1e-12) << name;
    }
  }
}

TEST(Sampling, MintonDrawsKAtLeastM) {
  for (const auto& c : sample(spec_for("minton", SuiteKind::Exact, 200))) {
    const auto in = as_map(c);
    EXPECT_GE(std::stoi(in.at("k")), total_m(in.at("m")));
  }
  for (const auto& c : sample(spec_for("minton_extended", SuiteKind::Exact, 200))) {
    const auto in = as_map(c);
    EXPECT_LT(std::stoi(in.at("k")), total_m(in.at("m")));
  }
}

TEST(Sampling, ExactDrawsRespectBounds) {
  auto spec = spec_for("karlsson", SuiteKind::Exact, 200);
  for (const auto& c : sample(spec)) {
    const auto in = as_map(c);
    const std::string& m = in.at("m");
    EXPECT_LE(total_m(m), spec.r_max * spec.m_max);
    const int a = -std::stoi(in.at("a"));
    EXPECT_GE(a, 0);
    EXPECT_LE(a, total_m(m) + spec.k_max);
    const Scalar b = Scalar::parse(in.at("b"), 30);
    EXPECT_TRUE(b.is_exact());
    EXPECT_LE(b.magnitude(), spec.param_box.hi);
  }
}

TEST(Sampling, UnknownIdentityRejected) {
  EXPECT_THROW(sample(spec_for("no_such_identity", SuiteKind::Exact, 1)), PreconditionViolation);
  EXPECT_THROW(sample(spec_for("minton", SuiteKind::Float, 1)), PreconditionViolation);
}

TEST(Verify, ExactSuitesPass) {
  const RunOptions opts{50, 2};
  for (const auto& name : exact_identities()) {
    const VerifyReport r = verify(spec_for(name, SuiteKind::Exact, 25), opts);
    EXPECT_EQ(r.cases_run, 25) << name;
    EXPECT_EQ(r.cases_failed, 0) << name;
    EXPECT_EQ(r.cases_run, r.cases_exact_pass + r.cases_float_pass + r.cases_failed) << name;
  }
}

TEST(Verify, FloatSuitesPass) {
  const RunOptions opts{50, 2};
  for (const auto& name : float_identities()) {
    const VerifyReport r = verify(spec_for(name, SuiteKind::Float, 8), opts);
    EXPECT_EQ(r.cases_float_pass, 8) << name;
    EXPECT_EQ(r.no_convergence, 0) << name;
    EXPECT_LT(r.worst_rel_residual, 1e-45) << name;
  }
}

TEST(Verify, CrossChecksAgree) {
  const RunOptions opts{40, 2};
  for (const auto& pair : cross_check_pairs()) {
    const VerifyReport r = cross_check(pair, spec_for(pair, SuiteKind::CrossCheck, 10), opts);
    EXPECT_EQ(r.cases_run, 10) << pair;
    EXPECT_EQ(r.cases_failed, 0) << pair;
  }
  EXPECT_THROW(cross_check("minton->karlsson", spec_for("minton->karlsson", SuiteKind::CrossCheck, 1), opts),
               PreconditionViolation);
}

TEST(Verify, CounterexampleIsTheOnlyFailure) {
  const VerifyReport r = counterexample_suite(RunOptions{50, 1});
  EXPECT_EQ(r.cases_run, 2);
  EXPECT_EQ(r.cases_failed, 1);
  EXPECT_EQ(r.expected_failures, 1);
  EXPECT_EQ(r.unexpected_failures(), 0);
  const auto failures = r.failures();
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_NE(failures[0].lhs, failures[0].rhs);
  EXPECT_GT(failures[0].abs_residual, 0.0);
}

TEST(Verify, ReportIndependentOfThreadCount) {
  const auto spec = spec_for("gasper", SuiteKind::Float, 12);
  const auto one = verify(spec, RunOptions{40, 1}).to_json().dump();
  const auto four = verify(spec, RunOptions{40, 4}).to_json().dump();
  EXPECT_EQ(one, four);
}

TEST(Verify, FailureRecordsRerunInIsolation) {
  // Each case depends only on (seed, index, attempt), so a single case
  // redrawn on its own reproduces the suite's record.
  const auto spec = spec_for("mp_transform", SuiteKind::Exact, 15);
  const VerifyReport r = verify(spec, RunOptions{50, 1});
  for (const auto& rec : r.cases) {
    const auto c = draw_case(spec, rec.index, rec.resampled);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->inputs, rec.inputs);
    const IdentityReport again = c->run(50);
    EXPECT_EQ(again.lhs.to_string(), rec.lhs);
    EXPECT_EQ(again.rhs.to_string(), rec.rhs);
  }
}

TEST(Verify, JsonShape) {
  const auto j = verify(spec_for("minton", SuiteKind::Exact, 3), RunOptions{50, 1}).to_json();
  for (const char* key : {"identity", "seed", "precision", "cases", "summary"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["cases"].size(), 3u);
  EXPECT_EQ(j["summary"]["cases_run"], 3);
}

TEST(Suites, SelectorsResolve) {
  EXPECT_EQ(default_suites("minton", 1).size(), 1u);
  EXPECT_EQ(default_suites("karlsson", 1).size(), 2u);
  EXPECT_EQ(default_suites("karlsson/float", 1).size(), 1u);
  EXPECT_EQ(default_suites("exact", 1).size(), exact_identities().size());
  EXPECT_EQ(default_suites("float", 1).size(), float_identities().size());
  EXPECT_EQ(default_suites("cross", 1).size(), cross_check_pairs().size());
  EXPECT_TRUE(default_suites("counterexample", 1).empty());
  EXPECT_THROW(default_suites("bogus", 1), PreconditionViolation);
}
