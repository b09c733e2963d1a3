#include "hyperid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hyperid/errors.hpp"

namespace hyperid {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr int kMaxAttempts = 1000;

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::derive(std::uint64_t seed, std::string_view suite, std::uint64_t index,
                                 std::uint64_t attempt) {
  std::uint64_t k = mix(seed + kGolden);
  k = mix(k ^ fnv1a(suite));
  k = mix(k ^ (index * kGolden));
  return mix(k ^ (attempt * 0xd1b54a32d192ed03ULL));
}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

__extension__ using Wide = unsigned __int128;

long CounterRng::integer(long lo, long hi) {
  const auto span = static_cast<Wide>(static_cast<std::uint64_t>(hi - lo) + 1);
  // Multiply-shift; the bias is below 2^-50 for the spans used here.
  return lo + static_cast<long>((static_cast<Wide>(next()) * span) >> 64);
}

double CounterRng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

bool admissibility_error(const std::exception_ptr& e, bool& no_convergence) {
  try {
    std::rethrow_exception(e);
  } catch (const PreconditionViolation&) {
    return true;
  } catch (const PoleError&) {
    return true;
  } catch (const DivisionByZero&) {
    return true;
  } catch (const RootFindingFailure&) {
    return true;
  } catch (const NoConvergence&) {
    no_convergence = true;
    return true;
  } catch (...) {
    return false;
  }
}

void fill_from_report(CaseRecord& rec, const IdentityReport& r) {
  rec.lhs = r.lhs.to_string();
  rec.rhs = r.rhs.to_string();
  rec.mode = r.mode;
  rec.abs_residual = r.abs_residual;
  rec.rel_residual = r.rel_residual;
  rec.est_error = r.est_error;
  rec.pass = r.holds();
}

// Compares the chosen side of two reports of a specialization pair.
void fill_from_pair(CaseRecord& rec, const IdentityReport& first, const IdentityReport& second, bool compare_lhs) {
  const Scalar& v1 = compare_lhs ? first.lhs : first.rhs;
  const Scalar& v2 = compare_lhs ? second.lhs : second.rhs;
  rec.lhs = v1.to_string();
  rec.rhs = v2.to_string();
  const Scalar diff = v1 - v2;
  rec.abs_residual = diff.magnitude();
  const double scale = std::max(v1.magnitude(), v2.magnitude());
  rec.rel_residual = scale > 0.0 ? rec.abs_residual / scale : rec.abs_residual;
  const bool exact = v1.is_exact() && v2.is_exact();
  rec.mode = exact ? Mode::Exact : Mode::Float;
  rec.est_error = exact ? 0.0 : first.est_error + second.est_error;
  const bool agree = exact ? diff.is_zero() : rec.rel_residual <= 10.0 * rec.est_error;
  rec.pass = agree && first.holds() && second.holds();
}

CaseRecord run_case(const SamplerSpec& spec, int index, int prec) {
  CaseRecord rec;
  rec.index = index;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::optional<SampledCase> c = draw_case(spec, index, attempt);
    if (!c) {
      ++rec.resampled;
      continue;
    }
    rec.inputs = c->inputs;
    try {
      WorkingPrecision guard(prec);
      const IdentityReport first = c->run(prec);
      if (c->partner) {
        fill_from_pair(rec, first, c->partner(prec), c->compare_lhs);
      } else {
        fill_from_report(rec, first);
      }
      rec.expected_failure = c->expect_failure && !rec.pass;
      return rec;
    } catch (...) {
      bool nc = false;
      if (!admissibility_error(std::current_exception(), nc)) throw;
      if (nc) ++rec.no_convergence;
      ++rec.resampled;
    }
  }
  rec.error = "sampling exhausted after " + std::to_string(kMaxAttempts) + " attempts";
  rec.pass = false;
  return rec;
}

template <class F>
void parallel_for(int n, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i = next++; i < n && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

void summarize(VerifyReport& report) {
  report.cases_run = static_cast<int>(report.cases.size());
  for (const auto& c : report.cases) {
    report.cases_resampled += c.resampled;
    report.no_convergence += c.no_convergence;
    if (c.pass) {
      (c.mode == Mode::Exact ? report.cases_exact_pass : report.cases_float_pass) += 1;
    } else {
      ++report.cases_failed;
      if (c.expected_failure) ++report.expected_failures;
    }
    if (c.mode == Mode::Float && std::isfinite(c.rel_residual)) {
      report.worst_rel_residual = std::max(report.worst_rel_residual, c.rel_residual);
    }
  }
}

VerifyReport run_spec(const SamplerSpec& spec, const RunOptions& options) {
  VerifyReport report;
  report.identity = spec.identity;
  report.kind = spec.kind;
  report.seed = spec.seed;
  report.precision = options.precision;
  report.cases.resize(static_cast<std::size_t>(std::max(spec.count, 0)));
  parallel_for(spec.count, options.threads,
               [&](int i) { report.cases[static_cast<std::size_t>(i)] = run_case(spec, i, options.precision); });
  summarize(report);
  return report;
}

}  // namespace

std::vector<CaseRecord> VerifyReport::failures() const {
  std::vector<CaseRecord> out;
  for (const auto& c : cases)
    if (!c.pass) out.push_back(c);
  return out;
}

nlohmann::ordered_json VerifyReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["identity"] = identity;
  j["kind"] = to_string(kind);
  j["seed"] = seed;
  j["precision"] = precision;
  ordered_json cs = ordered_json::array();
  for (const auto& c : cases) {
    ordered_json e;
    e["index"] = c.index;
    ordered_json in = ordered_json::object();
    for (const auto& [k, v] : c.inputs) in[k] = v;
    e["inputs"] = in;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["mode"] = to_string(c.mode);
    e["abs_residual"] = c.abs_residual;
    e["rel_residual"] = c.rel_residual;
    e["est_error"] = c.est_error;
    e["pass"] = c.pass;
    e["resampled"] = c.resampled;
    if (c.expected_failure) e["expected_failure"] = true;
    if (!c.error.empty()) e["error"] = c.error;
    cs.push_back(std::move(e));
  }
  j["cases"] = std::move(cs);
  ordered_json s;
  s["cases_run"] = cases_run;
  s["cases_exact_pass"] = cases_exact_pass;
  s["cases_float_pass"] = cases_float_pass;
  s["cases_failed"] = cases_failed;
  s["expected_failures"] = expected_failures;
  s["cases_resampled"] = cases_resampled;
  s["no_convergence"] = no_convergence;
  s["worst_rel_residual"] = worst_rel_residual;
  j["summary"] = std::move(s);
  return j;
}

VerifyReport verify(const SamplerSpec& spec, const RunOptions& options) {
  if (spec.kind == SuiteKind::Fixed) return counterexample_suite(options);
  return run_spec(spec, options);
}

VerifyReport cross_check(const std::string& pair, const SamplerSpec& spec, const RunOptions& options) {
  const auto pairs = cross_check_pairs();
  if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
    throw PreconditionViolation("unregistered specialization pair: " + pair);
  }
  SamplerSpec s = spec;
  s.identity = pair;
  s.kind = SuiteKind::CrossCheck;
  return run_spec(s, options);
}

VerifyReport counterexample_suite(const RunOptions& options) {
  VerifyReport report;
  report.identity = "counterexample";
  report.kind = SuiteKind::Fixed;
  report.precision = options.precision;
  const std::vector<std::pair<std::string, std::string>> inputs = {
      {"a", "-4"}, {"b", "33/17"}, {"c", "50/17"}, {"f", "[21/5, -5/3]"}, {"m", "[7, 8]"}};
  {
    WorkingPrecision guard(options.precision);
    CaseRecord rec;
    rec.index = 0;
    rec.inputs = inputs;
    fill_from_report(rec, karlsson_counterexample(options.precision));
    rec.expected_failure = !rec.pass;
    report.cases.push_back(rec);
    CaseRecord res;
    res.index = 1;
    res.inputs = inputs;
    res.inputs.front().first = "k";
    res.inputs.front().second = "4";
    fill_from_report(res, counterexample_resolution(options.precision));
    report.cases.push_back(res);
  }
  summarize(report);
  return report;
}

std::vector<SamplerSpec> default_suites(const std::string& selector, std::uint64_t seed, int exact_count,
                                        int float_count, int cross_count) {
  auto exact = [&](const std::string& name) {
    SamplerSpec s;
    s.identity = name;
    s.kind = SuiteKind::Exact;
    s.count = exact_count;
    s.seed = seed;
    return s;
  };
  auto floating = [&](const std::string& name) {
    SamplerSpec s;
    s.identity = name;
    s.kind = SuiteKind::Float;
    s.count = float_count;
    s.seed = seed;
    s.param_box = {-8.0, 8.0};
    return s;
  };
  auto cross = [&](const std::string& name) {
    SamplerSpec s;
    s.identity = name;
    s.kind = SuiteKind::CrossCheck;
    s.count = cross_count;
    s.seed = seed;
    s.param_box = {-8.0, 8.0};
    return s;
  };
  const auto ex = exact_identities();
  const auto fl = float_identities();
  const auto cr = cross_check_pairs();
  auto contains = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };

  std::vector<SamplerSpec> out;
  const bool all = selector == "all";
  if (all || selector == "exact")
    for (const auto& n : ex) out.push_back(exact(n));
  if (all || selector == "float")
    for (const auto& n : fl) out.push_back(floating(n));
  if (all || selector == "cross")
    for (const auto& n : cr) out.push_back(cross(n));
  if (!out.empty() || all || selector == "counterexample") return out;

  if (contains(cr, selector)) return {cross(selector)};
  const auto slash = selector.find('/');
  const std::string name = selector.substr(0, slash);
  const std::string kind = slash == std::string::npos ? "" : selector.substr(slash + 1);
  if (contains(ex, name) && (kind.empty() || kind == "exact")) out.push_back(exact(name));
  if (contains(fl, name) && (kind.empty() || kind == "float")) out.push_back(floating(name));
  if (out.empty()) throw PreconditionViolation("unknown suite: " + selector);
  return out;
}

int SuiteRun::unexpected_failures() const {
  int n = 0;
  for (const auto& r : reports) n += r.unexpected_failures();
  return n;
}

nlohmann::ordered_json SuiteRun::to_json(std::uint64_t seed, int precision) const {
  nlohmann::ordered_json j;
  j["generator"] = CounterRng::kAlgorithm;
  j["seed"] = seed;
  j["precision"] = precision;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  int run = 0;
  int failed = 0;
  int expected = 0;
  for (const auto& r : reports) {
    suites.push_back(r.to_json());
    run += r.cases_run;
    failed += r.cases_failed;
    expected += r.expected_failures;
  }
  j["suites"] = std::move(suites);
  nlohmann::ordered_json s;
  s["suites"] = reports.size();
  s["cases_run"] = run;
  s["cases_failed"] = failed;
  s["expected_failures"] = expected;
  s["unexpected_failures"] = failed - expected;
  j["summary"] = std::move(s);
  return j;
}

SuiteRun run_suites(const std::string& selector, std::uint64_t seed, const RunOptions& options) {
  SuiteRun run;
  for (const auto& spec : default_suites(selector, seed)) run.reports.push_back(verify(spec, options));
  if (selector == "all" || selector == "counterexample") run.reports.push_back(counterexample_suite(options));
  return run;
}

}  // namespace hyperid
