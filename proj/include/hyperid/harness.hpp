#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperid/identities.hpp"

namespace hyperid {

/// Counter-based SplitMix64: the i-th output of a stream keyed by k is
/// mix(k + (i+1) * 0x9e3779b97f4a7c15), so any draw can be recomputed from
/// (key, counter) alone.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-counter";

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z);
  /// Key for one sampling attempt of one case of one suite.
  static std::uint64_t derive(std::uint64_t seed, std::string_view suite, std::uint64_t index, std::uint64_t attempt);

  std::uint64_t next();
  /// Uniform on [lo, hi].
  long integer(long lo, long hi);
  /// Uniform on [0, 1).
  double unit();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class SuiteKind { Exact, Float, CrossCheck, Fixed };

std::string to_string(SuiteKind kind);

struct Bounds {
  double lo;
  double hi;
};

/// Sampling parameters for one suite. Exact suites draw from the rational
/// lattice p/q with |p| <= 40, 1 <= q <= 12 and |value| <= param_box.hi;
/// float suites draw uniformly from param_box and quantize to multiples of
/// 1/1000, so sampled values are reproducible rationals.
struct SamplerSpec {
  std::string identity;
  SuiteKind kind = SuiteKind::Exact;
  int r_max = 3;
  int m_max = 4;
  int k_max = 8;  // terminating index ranges over [k_min, k_min + k_max]
  int p_max = 4;
  Bounds param_box{-20.0, 20.0};
  double convergence_margin = 1.0;  // minimum excess s for unit-argument series
  int count = 200;
  std::uint64_t seed = 42;

  std::string suite_name() const;
};

/// One sampled identity instance: printable inputs and the evaluation.
struct SampledCase {
  std::vector<std::pair<std::string, std::string>> inputs;
  std::function<IdentityReport(int prec)> run;
  /// Cross checks compare a second report; empty for ordinary cases.
  std::function<IdentityReport(int prec)> partner;
  /// Cross checks compare the left sides instead of the right sides.
  bool compare_lhs = false;
  /// Exact fixtures whose identity is expected to fail.
  bool expect_failure = false;
};

/// Registered identity names, in report order.
std::vector<std::string> registered_identities();
/// Identities with an exact (terminating) sampler.
std::vector<std::string> exact_identities();
/// Identities with a float (non-terminating) sampler.
std::vector<std::string> float_identities();
/// Registered specialization pairs, "first->second".
std::vector<std::string> cross_check_pairs();

/// The attempt-th draw for case `index`; nullopt when the draw violates a
/// precondition the sampler checks itself. Pure in (spec, index, attempt).
/// Throws PreconditionViolation for unknown identities.
std::optional<SampledCase> draw_case(const SamplerSpec& spec, int index, int attempt);

/// The first admissible draw of every case index (precondition filter only,
/// no evaluation). Throws SamplingExhausted after 1000 rejected draws.
std::vector<SampledCase> sample(const SamplerSpec& spec);

struct CaseRecord {
  int index = 0;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string lhs;
  std::string rhs;
  Mode mode = Mode::Exact;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double est_error = 0.0;
  bool pass = false;
  bool expected_failure = false;
  int resampled = 0;
  int no_convergence = 0;
  std::string error;  // set when the retry bound was exhausted
};

struct VerifyReport {
  std::string identity;
  SuiteKind kind = SuiteKind::Exact;
  int cases_run = 0;
  int cases_exact_pass = 0;
  int cases_float_pass = 0;
  int cases_failed = 0;
  int cases_resampled = 0;
  int expected_failures = 0;
  int no_convergence = 0;  // resamples caused by NoConvergence
  double worst_rel_residual = 0.0;
  std::uint64_t seed = 0;
  int precision = 0;
  std::vector<CaseRecord> cases;

  std::vector<CaseRecord> failures() const;
  /// Failures not marked as expected.
  int unexpected_failures() const { return cases_failed - expected_failures; }
  nlohmann::ordered_json to_json() const;
};

struct RunOptions {
  int precision = kDefaultPrecision;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs the identity over the sampled stream. Cases that raise a
/// precondition, pole, root-finding or convergence error are redrawn with the
/// next attempt key, at most 1000 times.
VerifyReport verify(const SamplerSpec& spec, const RunOptions& options);

/// Evaluates both members of a registered specialization pair on shared
/// parameters; a case fails when either member fails or their compared
/// values disagree beyond 10 times the combined error estimate.
VerifyReport cross_check(const std::string& pair, const SamplerSpec& spec, const RunOptions& options);

/// The fixed counterexample suite: Karlsson's formula at the published point
/// (expected failure) and its extended-sum resolution.
VerifyReport counterexample_suite(const RunOptions& options);

/// Default suites selected by name: "all", "exact", "float", "cross",
/// "counterexample", an identity name, a suite name such as
/// "karlsson/float", or a cross-check pair.
std::vector<SamplerSpec> default_suites(const std::string& selector, std::uint64_t seed, int exact_count = 200,
                                        int float_count = 100, int cross_count = 100);

struct SuiteRun {
  std::vector<VerifyReport> reports;
  int unexpected_failures() const;
  nlohmann::ordered_json to_json(std::uint64_t seed, int precision) const;
};

/// Runs every selected suite (plus the counterexample suite when selected).
SuiteRun run_suites(const std::string& selector, std::uint64_t seed, const RunOptions& options);

}  // namespace hyperid
