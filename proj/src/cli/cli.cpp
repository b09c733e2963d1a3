#include "hyperid/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "hyperid/errors.hpp"
#include "hyperid/harness.hpp"
#include "hyperid/identities.hpp"

namespace hyperid {

namespace {

constexpr int kMinPrecision = 16;
constexpr int kMaxPrecision = 290;

// Raw command-line parameters of one identity evaluation.
struct Params {
  std::map<std::string, std::string> scalars;  // a, c, d, x, z
  std::vector<std::string> b;
  std::vector<std::string> f;
  std::vector<int> m;
  std::vector<int> p;
  std::optional<int> k;
  std::string route = "auto";
};

struct Context {
  int precision;
  Params params;

  Scalar scalar(const std::string& name) const {
    if (name == "b") {
      if (params.b.size() != 1) throw PreconditionViolation("expected exactly one --b");
      return Scalar::parse(params.b.front(), precision + 10);
    }
    const auto it = params.scalars.find(name);
    if (it == params.scalars.end() || it->second.empty()) throw PreconditionViolation("missing --" + name);
    return Scalar::parse(it->second, precision + 10);
  }

  std::vector<Scalar> b_vector() const {
    if (params.b.empty()) throw PreconditionViolation("missing --b");
    std::vector<Scalar> out;
    for (const auto& s : params.b) out.push_back(Scalar::parse(s, precision + 10));
    return out;
  }

  int integer(const std::optional<int>& v, const std::string& name) const {
    if (!v) throw PreconditionViolation("missing --" + name);
    return *v;
  }

  int k() const { return integer(params.k, "k"); }

  int p() const {
    if (params.p.size() != 1) throw PreconditionViolation("expected exactly one --p");
    return params.p.front();
  }

  ShiftedFamily family() const {
    if (params.f.empty()) throw PreconditionViolation("missing --f/--m");
    std::vector<Scalar> f;
    for (const auto& s : params.f) f.push_back(Scalar::parse(s, precision + 10));
    return ShiftedFamily(std::move(f), params.m);
  }

  ZetaRoute route() const {
    if (params.route == "auto") return ZetaRoute::Auto;
    if (params.route == "roots") return ZetaRoute::Roots;
    if (params.route == "polynomial") return ZetaRoute::Polynomial;
    throw PreconditionViolation("--route must be auto, roots or polynomial");
  }
};

using Evaluator = std::function<IdentityReport(const Context&)>;

const std::map<std::string, Evaluator>& evaluators() {
  static const std::map<std::string, Evaluator> table = {
      {"minton", [](const Context& c) { return minton(c.k(), c.scalar("b"), c.family(), c.precision); }},
      {"minton_extended",
       [](const Context& c) { return minton_extended(c.k(), c.scalar("b"), c.family(), c.precision); }},
      {"karlsson",
       [](const Context& c) { return karlsson(c.scalar("a"), c.scalar("b"), c.family(), c.precision); }},
      {"karlsson_multi",
       [](const Context& c) {
         return karlsson_multi(c.scalar("a"), c.b_vector(), c.params.p, c.family(), c.precision);
       }},
      {"gasper",
       [](const Context& c) {
         return gasper(c.scalar("a"), c.scalar("b"), c.scalar("c"), c.family(), c.precision);
       }},
      {"degenerate_sum",
       [](const Context& c) { return degenerate_sum(c.scalar("a"), c.scalar("b"), c.p(), c.family(), c.precision); }},
      {"mp2012_sum",
       [](const Context& c) {
         return mp2012_sum(c.scalar("a"), c.scalar("b"), c.scalar("c"), c.family(), c.precision);
       }},
      {"mp_transform",
       [](const Context& c) {
         return mp_transform(c.scalar("a"), c.scalar("b"), c.scalar("c"), c.family(), c.scalar("x"), c.precision,
                             c.route());
       }},
      {"q_summation",
       [](const Context& c) {
         return q_summation(c.scalar("a"), c.scalar("b"), c.scalar("c"), c.family(), c.precision);
       }},
      {"g_identity",
       [](const Context& c) {
         const ZetaRoute r = c.route() == ZetaRoute::Auto ? ZetaRoute::Roots : c.route();
         return g_identity(c.scalar("b"), c.scalar("c"), c.family(), c.scalar("z"), c.precision, r);
       }},
      {"product_identity",
       [](const Context& c) {
         return product_identity(c.scalar("a"), c.scalar("b"), c.scalar("c"), c.scalar("d"), c.family(),
                                 c.precision, c.route());
       }},
      {"recurrence_step",
       [](const Context& c) {
         return recurrence_step(c.scalar("a"), c.scalar("b"), c.p(), c.family(), c.precision);
       }},
      {"recurrence_chain",
       [](const Context& c) {
         return recurrence_chain(c.scalar("a"), c.scalar("b"), c.p(), c.family(), c.precision);
       }},
      {"contiguous_shift", [](const Context& c) { return contiguous_shift(c.k(), c.family()); }},
      {"terminal_vanishing", [](const Context& c) { return terminal_vanishing(c.family()); }},
      {"terminal_value", [](const Context& c) { return terminal_value(c.family()); }},
      {"pochhammer_reflection_check",
       [](const Context& c) { return pochhammer_reflection_check(c.scalar("b"), c.family()); }},
  };
  return table;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

nlohmann::ordered_json report_json(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.name;
  j["mode"] = to_string(r.mode);
  j["lhs"] = r.lhs.to_string();
  j["rhs"] = r.rhs.to_string();
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["est_error"] = r.est_error;
  j["pass"] = r.holds();
  return j;
}

void print_report(std::ostream& out, const IdentityReport& r) {
  out << "identity      " << r.name << "\n"
      << "mode          " << to_string(r.mode) << "\n"
      << "lhs           " << r.lhs.to_string() << "\n"
      << "rhs           " << r.rhs.to_string() << "\n"
      << "abs_residual  " << format_double(r.abs_residual) << "\n"
      << "rel_residual  " << format_double(r.rel_residual) << "\n"
      << "est_error     " << format_double(r.est_error) << "\n"
      << "result        " << (r.holds() ? "pass" : "FAIL") << "\n";
}

void add_param_options(CLI::App* sub, Params& p) {
  for (const char* name : {"a", "c", "d", "x", "z"}) {
    sub->add_option(std::string("--") + name, p.scalars[name], std::string("scalar parameter ") + name);
  }
  sub->add_option("--b", p.b, "b (repeat for karlsson_multi)");
  sub->add_option("--k", p.k, "nonnegative integer k");
  sub->add_option("--p", p.p, "positive integer p (repeat for karlsson_multi)");
  sub->add_option("--f", p.f, "family component f_i (repeat)");
  sub->add_option("--m", p.m, "shift m_i (repeat, one per --f)");
  sub->add_option("--route", p.route, "zeta route: auto, roots, polynomial");
}

int default_precision() {
  if (const char* env = std::getenv("HYPERID_PRECISION")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
    }
  }
  return kDefaultPrecision;
}

void print_verify_table(std::ostream& out, const SuiteRun& run) {
  out << std::left << std::setw(40) << "suite" << std::right << std::setw(6) << "run" << std::setw(7) << "exact"
      << std::setw(7) << "float" << std::setw(7) << "fail" << std::setw(9) << "expected" << std::setw(10)
      << "resampled" << std::setw(13) << "worst_rel" << "\n";
  for (const auto& r : run.reports) {
    out << std::left << std::setw(40) << (r.identity + "/" + to_string(r.kind)) << std::right << std::setw(6)
        << r.cases_run << std::setw(7) << r.cases_exact_pass << std::setw(7) << r.cases_float_pass << std::setw(7)
        << r.cases_failed << std::setw(9) << r.expected_failures << std::setw(10) << r.cases_resampled
        << std::setw(13) << format_double(r.worst_rel_residual) << "\n";
  }
  out << "unexpected failures: " << run.unexpected_failures() << "\n";
}

int cmd_counterexample(std::ostream& out, int precision, bool json) {
  const IdentityReport k = karlsson_counterexample(precision);
  const IdentityReport r = counterexample_resolution(precision);
  const Scalar diff = k.lhs - k.rhs;
  if (json) {
    nlohmann::ordered_json j;
    j["parameters"] = {{"a", "-4"}, {"b", "33/17"}, {"c", "50/17"}, {"f", {"21/5", "-5/3"}}, {"m", {7, 8}}};
    j["lhs"] = k.lhs.to_string();
    j["karlsson_rhs"] = k.rhs.to_string();
    j["difference"] = diff.to_string();
    j["karlsson_holds"] = k.holds();
    j["extended_rhs"] = r.rhs.to_string();
    j["extended_holds"] = r.holds();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "F(-4, 33/17, f+m; 50/17, f; 1) with f = (21/5, -5/3), m = (7, 8), m = 15\n\n"
      << "terminating sum (5 terms)    " << k.lhs.to_string() << "\n"
      << "Karlsson closed form         " << k.rhs.to_string() << "\n"
      << "difference                   " << diff.to_string() << "\n"
      << "extended sum, k = 4 < m      " << r.rhs.to_string() << "  (" << (r.holds() ? "matches" : "MISMATCH")
      << ")\n\n"
      << "The closed form is the continuation of the sum in a from Re(1-a-m) > 0.\n"
      << "At a = -4 the series terminates, but k = 4 < m = 15 lies outside that\n"
      << "half plane; there the terminating sum picks up the correction\n"
      << "-(-1)^m k! b/(f)_m q_k, with q_k built from Norlund coefficients, and the\n"
      << "closed form alone is wrong.\n";
  return 0;
}

struct TableOptions {
  std::string identity;
  std::string vary;
  std::string from;
  std::string to;
  int steps = 5;
};

int cmd_table(std::ostream& out, std::ostream& err, const TableOptions& t, const Context& base, bool json) {
  const auto it = evaluators().find(t.identity);
  if (it == evaluators().end()) {
    err << "unknown identity: " << t.identity << "\n";
    return 2;
  }
  if (t.steps < 1) {
    err << "--steps must be >= 1\n";
    return 2;
  }
  const Scalar lo = Scalar::parse(t.from, base.precision + 10);
  const Scalar hi = Scalar::parse(t.to, base.precision + 10);
  const bool integral = t.vary == "k" || t.vary == "p";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (!json) out << t.vary << ",lhs,rhs,rel_residual,pass\n";
  for (int i = 0; i < t.steps; ++i) {
    Scalar v = t.steps == 1 ? lo : lo + (hi - lo) * Scalar(i) / Scalar(t.steps - 1);
    Context c = base;
    std::string shown;
    if (integral) {
      const long n = std::lround(v.re_double());
      shown = std::to_string(n);
      if (t.vary == "k") c.params.k = static_cast<int>(n);
      else c.params.p = {static_cast<int>(n)};
    } else {
      shown = v.to_string();
      if (t.vary == "b") c.params.b = {shown};
      else c.params.scalars[t.vary] = shown;
    }
    nlohmann::ordered_json row;
    row[t.vary] = shown;
    try {
      WorkingPrecision guard(c.precision);
      const IdentityReport r = it->second(c);
      row["lhs"] = r.lhs.to_string();
      row["rhs"] = r.rhs.to_string();
      row["rel_residual"] = r.rel_residual;
      row["pass"] = r.holds();
      if (!json) {
        out << shown << "," << r.lhs.to_string() << "," << r.rhs.to_string() << "," << format_double(r.rel_residual)
            << "," << (r.holds() ? "pass" : "FAIL") << "\n";
      }
    } catch (const Error& e) {
      row["error"] = e.what();
      if (!json) out << shown << ",,,,error: " << e.what() << "\n";
    }
    rows.push_back(std::move(row));
  }
  if (json) {
    nlohmann::ordered_json j;
    j["identity"] = t.identity;
    j["vary"] = t.vary;
    j["precision"] = base.precision;
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify hypergeometric summation and transformation identities."};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  int precision = default_precision();
  std::uint64_t seed = 42;
  std::string output = "text";
  app.add_option("--precision", precision, "working precision in digits (default 50 or HYPERID_PRECISION)");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--output", output, "output format: text or json")->check(CLI::IsMember({"text", "json"}));
  bool json_flag = false;
  app.add_flag("--json", json_flag, "same as --output json");

  Params params;
  std::string identity;
  auto* eval = app.add_subcommand("eval", "evaluate both sides of one identity");
  eval->add_option("identity", identity, "identity name")->required();
  add_param_options(eval, params);

  std::string suite = "all";
  std::string report_path;
  unsigned threads = 0;
  int exact_count = 200;
  int float_count = 100;
  int cross_count = 100;
  auto* verify_cmd = app.add_subcommand("verify", "run randomized verification suites");
  verify_cmd->add_option("--suite", suite, "all, exact, float, cross, counterexample, an identity or suite name");
  verify_cmd->add_option("--report", report_path, "write the JSON report to this file");
  verify_cmd->add_option("--threads", threads, "worker threads (0: all cores)");
  verify_cmd->add_option("--exact-cases", exact_count, "cases per exact suite");
  verify_cmd->add_option("--float-cases", float_count, "cases per float suite");
  verify_cmd->add_option("--cross-cases", cross_count, "cases per cross check");

  app.add_subcommand("counterexample", "show where Karlsson's closed form fails");

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "tabulate an identity over a parameter range");
  table_cmd->add_option("identity", table.identity, "identity name")->required();
  table_cmd->add_option("--vary", table.vary, "parameter to vary")->required();
  table_cmd->add_option("--from", table.from, "first value")->required();
  table_cmd->add_option("--to", table.to, "last value")->required();
  table_cmd->add_option("--steps", table.steps, "number of grid points");
  add_param_options(table_cmd, params);

  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("hyperid");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  const bool json = json_flag || output == "json";
  if (precision < kMinPrecision || precision > kMaxPrecision) {
    err << "error: precision must lie in [" << kMinPrecision << ", " << kMaxPrecision << "]\n";
    return 2;
  }

  try {
    if (eval->parsed()) {
      const auto it = evaluators().find(identity);
      if (it == evaluators().end()) {
        err << "error: unknown identity '" << identity << "'\n";
        return 2;
      }
      WorkingPrecision guard(precision);
      const IdentityReport r = it->second(Context{precision, params});
      if (json) out << report_json(r).dump(2) << "\n";
      else print_report(out, r);
      return r.holds() ? 0 : 1;
    }
    if (verify_cmd->parsed()) {
      const RunOptions options{precision, threads};
      SuiteRun run;
      for (const auto& spec : default_suites(suite, seed, exact_count, float_count, cross_count)) {
        run.reports.push_back(verify(spec, options));
      }
      if (suite == "all" || suite == "counterexample") run.reports.push_back(counterexample_suite(options));
      const std::string doc = run.to_json(seed, precision).dump(2) + "\n";
      if (!report_path.empty()) {
        std::ofstream file(report_path, std::ios::binary);
        if (!file) {
          err << "error: cannot write " << report_path << "\n";
          return 2;
        }
        file << doc;
      }
      if (json) out << doc;
      else print_verify_table(out, run);
      return run.unexpected_failures() == 0 ? 0 : 1;
    }
    if (app.got_subcommand("counterexample")) return cmd_counterexample(out, precision, json);
    if (table_cmd->parsed()) return cmd_table(out, err, table, Context{precision, params}, json);
  } catch (const PreconditionViolation& e) {
    err << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hyperid
