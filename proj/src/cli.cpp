#include "sumrules/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumrules/verification.hpp"

namespace sumrules::cli {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Precision { Double, Extended };

Precision parse_precision(const std::string& text) {
  if (text == "double") return Precision::Double;
  if (text == "extended") return Precision::Extended;
  throw DomainError("precision must be 'double' or 'extended'");
}

BesselOptions bessel_options_from_env() {
  BesselOptions options;
  if (const char* env = std::getenv("BESSEL_SUMRULES_MAX_N"); env != nullptr && *env != '\0') {
    int value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value < 0) {
      throw DomainError("BESSEL_SUMRULES_MAX_N must be a non-negative integer");
    }
    options.max_order = value;
  }
  return options;
}

std::vector<double> parse_z_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw DomainError("invalid z value '" + item + "'");
    if (!std::isfinite(value) || value <= 0) throw DomainError("invalid z: " + item + " (z must be > 0)");
    out.push_back(value);
  }
  if (out.empty()) throw DomainError("z list is empty");
  return out;
}

template <class Real>
double as_double(const Real& x) {
  return static_cast<double>(x);
}

json query_json(const SumRuleQuery& q) {
  return json{{"hierarchy", std::string(to_string(q.hierarchy))}, {"p", q.p}, {"ell", q.ell}, {"z", q.z}};
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string hierarchy;
  int p = 0;
  int ell = 0;
  double z = 0.0;
  std::string path = "closed";
  std::string format = "plain";
  std::string precision = "double";
  double tol = 1e-8;
  double abs_tol = 1e-12;
};

template <class Real>
int eval_impl(const EvalArgs& args, const SumRuleQuery& q, const BesselOptions& bopt, std::ostream& out) {
  const auto bessel = make_bessel_inputs<Real>(q, bopt);
  const bool want_closed = args.path == "closed" || args.path == "all";
  const bool want_recursive = args.path == "recursive" || args.path == "all";
  const Real lhs = direct_sum(q, bessel.at_z);

  json report{{"query", query_json(q)}, {"precision", args.precision}, {"lhs_direct", as_double(lhs)}};
  bool pass = true;
  auto compare = [&](const char* name, const Real& rhs) {
    using std::abs;
    const Real abs_err = abs(lhs - rhs);
    const Real rel_err = relative_error(lhs, rhs);
    const bool ok = rel_err <= Real(args.tol) || abs_err <= Real(args.abs_tol);
    pass = pass && ok;
    report[std::string("rhs_") + name] = as_double(rhs);
    report[std::string("abs_error_") + name] = as_double(abs_err);
    report[std::string("rel_error_") + name] = as_double(rel_err);
  };
  if (want_closed) compare("closed", closed_form(q, bessel.at_z, bessel.at_2z));
  if (want_recursive) compare("recursive", recursive_form(q, bessel.at_z, bessel.at_2z));
  report["tolerance"] = args.tol;
  report["abs_tolerance"] = args.abs_tol;
  report["passed"] = pass;

  if (args.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << "hierarchy=" << to_string(q.hierarchy) << " p=" << q.p << " ell=" << q.ell
        << " z=" << format_double(q.z) << " precision=" << args.precision << "\n";
    for (const char* key : {"lhs_direct", "rhs_closed", "abs_error_closed", "rel_error_closed", "rhs_recursive",
                            "abs_error_recursive", "rel_error_recursive"}) {
      if (report.contains(key)) out << key << " = " << format_double(report[key].get<double>()) << "\n";
    }
    out << "status = " << (pass ? "pass" : "FAIL") << "\n";
  }
  return pass ? kSuccess : kVerificationFailure;
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const SumRuleQuery q{parse_hierarchy(args.hierarchy), args.p, args.ell, args.z};
  validate(q);
  const auto bopt = bessel_options_from_env();
  if (parse_precision(args.precision) == Precision::Extended) return eval_impl<ExtendedReal>(args, q, bopt, out);
  return eval_impl<double>(args, q, bopt, out);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  int max_p = 6;
  int max_ell = 60;
  std::string z_list = "0.5,1,5,20,50";
  std::string format = "plain";
  std::string precision = "double";
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  SuiteConfig config;
  config.max_p = args.max_p;
  config.max_ell = args.max_ell;
  config.z_list = parse_z_list(args.z_list);
  const SuiteReport report = parse_precision(args.precision) == Precision::Extended
                                 ? run_verification_suite<ExtendedReal>(config)
                                 : run_verification_suite<double>(config);
  if (args.format == "json") {
    json j{{"passed", report.all_passed()}, {"total", report.total()}};
    json ids = json::object();
    for (const auto& [id, c] : report.counts) ids[std::string(to_string(id))] = {{"passed", c.passed}, {"failed", c.failed}};
    j["identities"] = ids;
    json failures = json::array();
    for (const auto& f : report.failures) {
      failures.push_back({{"identity", std::string(to_string(f.identity))},
                          {"inputs", f.inputs.describe()},
                          {"residual", f.residual_string()},
                          {"scale", f.scale},
                          {"tolerance", f.tolerance}});
    }
    j["failures"] = failures;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [id, c] : report.counts) {
      out << to_string(id) << ": " << c.passed << "/" << (c.passed + c.failed) << " passed\n";
    }
    for (const auto& f : report.failures) {
      out << "FAIL " << to_string(f.identity) << " " << f.inputs.describe() << " residual=" << f.residual_string()
          << " scale=" << format_double(f.scale) << "\n";
    }
    out << (report.all_passed() ? "all " + std::to_string(report.total()) + " checks passed"
                                : std::to_string(report.failures.size()) + " checks failed")
        << "\n";
  }
  return report.all_passed() ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string hierarchy;
  int p = 0;
  std::vector<int> ells;
  double z = 0.0;
  int repeats = 100;
  int warmup = 10;
  bool include_bessel = false;
};

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  if (args.repeats < 1) throw DomainError("repeats must be >= 1");
  if (args.warmup < 0) throw DomainError("warmup must be >= 0");
  const auto bopt = bessel_options_from_env();
  const Hierarchy h = parse_hierarchy(args.hierarchy);
  for (int ell : args.ells) validate({h, args.p, ell, args.z});

  BenchOptions options;
  options.repeats = args.repeats;
  options.warmup = args.warmup;
  options.include_bessel = args.include_bessel;
  out << "hierarchy,p,ell,z,repeats,mean_ns_direct,mean_ns_closed,speedup,checksum\n";
  for (int ell : args.ells) {
    const BenchReport r = run_bench({h, args.p, ell, args.z}, options, bopt);
    out << to_string(h) << "," << r.query.p << "," << r.query.ell << "," << format_double(r.query.z) << ","
        << r.repeats << "," << format_double(r.mean_ns_direct) << "," << format_double(r.mean_ns_closed) << ","
        << format_double(r.speedup) << "," << format_double(r.checksum) << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// coeffs

struct CoeffsArgs {
  std::string hierarchy;
  int p = 0;
  int ell = 0;
  std::string format = "plain";
};

std::string join(const std::vector<Rational>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + to_string(values[i]);
  return s + "]";
}

json to_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

int cmd_coeffs(const CoeffsArgs& args, std::ostream& out) {
  const Hierarchy h = parse_hierarchy(args.hierarchy);
  const BoundaryPolynomials poly = boundary_polynomials(h, args.p, args.ell);
  const TailTerm tail = tail_term(h, args.p);
  const char* variable = poly.variable_kind == VariableKind::InverseZSquared ? "1/z^2" : "z^2";
  if (args.format == "json") {
    json j{{"hierarchy", std::string(to_string(h))},
           {"p", args.p},
           {"ell", args.ell},
           {"variable", variable},
           {"A", to_json(poly.a_coeffs)},
           {"B", to_json(poly.b_coeffs)},
           {"C", to_json(poly.c_coeffs)},
           {"tail", {{"coeffs", to_json(tail.coeffs)}, {"description", tail.describe()}}}};
    out << j.dump(2) << "\n";
  } else {
    out << "hierarchy=" << to_string(h) << " p=" << args.p << " ell=" << args.ell << " variable=" << variable << "\n";
    out << "A=" << join(poly.a_coeffs) << "\n";
    out << "B=" << join(poly.b_coeffs) << "\n";
    out << "C=" << join(poly.c_coeffs) << "\n";
    out << "tail: " << tail.describe() << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string hierarchy;
  int p = 0;
  int ell = 0;
  double z_min = 0.0;
  double z_max = 0.0;
  int z_steps = 1;
  std::string out_file;
  std::string precision = "double";
};

template <class Real>
void sweep_rows(const SweepArgs& args, Hierarchy h, const BesselOptions& bopt, std::ostream& out) {
  const DirectSumPlan<Real> direct(h, args.p, args.ell);
  const ClosedFormPlan<Real> closed(h, args.p, args.ell);
  out << "z,lhs_direct,rhs_closed,abs_err,rel_err\n";
  for (int i = 0; i < args.z_steps; ++i) {
    const double z = args.z_steps == 1 ? args.z_min
                                       : args.z_min + (args.z_max - args.z_min) * i / (args.z_steps - 1);
    const SumRuleQuery q{h, args.p, args.ell, z};
    const auto bessel = make_bessel_inputs<Real>(q, bopt);
    const Real lhs = direct.evaluate(bessel.at_z);
    const Real rhs = closed.evaluate(bessel.at_z, bessel.at_2z);
    using std::abs;
    out << format_double(z) << "," << format_double(as_double(lhs)) << "," << format_double(as_double(rhs)) << ","
        << format_double(as_double(abs(lhs - rhs))) << "," << format_double(as_double(relative_error(lhs, rhs)))
        << "\n";
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const Hierarchy h = parse_hierarchy(args.hierarchy);
  if (args.z_steps < 1) throw DomainError("z-steps must be >= 1");
  if (args.z_max < args.z_min) throw DomainError("z-max must be >= z-min");
  validate({h, args.p, args.ell, args.z_min});
  validate({h, args.p, args.ell, args.z_max});
  const auto bopt = bessel_options_from_env();
  const Precision precision = parse_precision(args.precision);

  std::ostringstream buffer;
  if (precision == Precision::Extended) {
    sweep_rows<ExtendedReal>(args, h, bopt, buffer);
  } else {
    sweep_rows<double>(args, h, bopt, buffer);
  }
  if (args.out_file.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(args.out_file, std::ios::binary);
    if (!file) throw IoError("cannot open '" + args.out_file + "' for writing");
    file << buffer.str();
    file.flush();
    if (!file) throw IoError("failed writing '" + args.out_file + "'");
  }
  return kSuccess;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

BenchReport run_bench(const SumRuleQuery& q, const BenchOptions& options, const BesselOptions& bessel) {
  validate(q);
  if (options.repeats < 1) throw DomainError("repeats must be >= 1");
  const DirectSumPlan<double> direct(q.hierarchy, q.p, q.ell);
  const ClosedFormPlan<double> closed(q.hierarchy, q.p, q.ell);
  const auto inputs = make_bessel_inputs<double>(q, bessel);

  auto direct_call = [&]() -> double {
    if (options.include_bessel) return direct.evaluate(spherical_j_sequence<double>(q.ell, q.z, bessel));
    return direct.evaluate(inputs.at_z);
  };
  auto closed_call = [&]() -> double {
    if (options.include_bessel) {
      return closed.evaluate(spherical_j_sequence<double>(q.ell + 1, q.z, bessel),
                             spherical_j_sequence<double>(q.p + 1, 2.0 * q.z, bessel));
    }
    return closed.evaluate(inputs.at_z, inputs.at_2z);
  };

  volatile double sink = 0.0;
  auto time_path = [&](auto&& call) {
    for (int i = 0; i < options.warmup; ++i) sink = sink + call();
    // Size the batch so one repeat spans at least min_batch_ns.
    long long batch = 1;
    for (;;) {
      const auto t0 = Clock::now();
      for (long long i = 0; i < batch; ++i) sink = sink + call();
      const double ns = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
      if (ns >= options.min_batch_ns || batch >= (1LL << 24)) break;
      batch *= 2;
    }
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(options.repeats));
    for (int r = 0; r < options.repeats; ++r) {
      const auto t0 = Clock::now();
      for (long long i = 0; i < batch; ++i) sink = sink + call();
      means.push_back(std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / static_cast<double>(batch));
    }
    std::nth_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(means.size() / 2), means.end());
    return means[means.size() / 2];
  };

  BenchReport report;
  report.query = q;
  report.repeats = options.repeats;
  report.mean_ns_direct = time_path(direct_call);
  report.mean_ns_closed = time_path(closed_call);
  report.speedup = report.mean_ns_direct / report.mean_ns_closed;
  report.checksum = closed.evaluate(inputs.at_z, inputs.at_2z);
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite sum rules for squared spherical Bessel functions", "bessel-sumrules"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one sum rule by direct summation and in closed form");
  eval_cmd->add_option("--hierarchy", eval.hierarchy, "1, 2, 3 or 3c")->required();
  eval_cmd->add_option("--p", eval.p, "Level p >= 0")->required();
  eval_cmd->add_option("--ell", eval.ell, "Upper summation bound")->required();
  eval_cmd->add_option("--z", eval.z, "Argument z > 0")->required();
  eval_cmd->add_option("--path", eval.path, "closed|direct|recursive|all")
      ->check(CLI::IsMember({"closed", "direct", "recursive", "all"}));
  eval_cmd->add_option("--format", eval.format)->check(CLI::IsMember({"plain", "json"}));
  eval_cmd->add_option("--tol", eval.tol, "Relative tolerance");
  eval_cmd->add_option("--abs-tol", eval.abs_tol, "Absolute tolerance for sums that vanish");
  eval_cmd->add_option("--precision", eval.precision, "double|extended");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the identity verification suite");
  verify_cmd->add_option("--max-p", verify.max_p);
  verify_cmd->add_option("--max-ell", verify.max_ell);
  verify_cmd->add_option("--z-list", verify.z_list, "Comma-separated z values");
  verify_cmd->add_option("--format", verify.format)->check(CLI::IsMember({"plain", "json"}));
  verify_cmd->add_option("--precision", verify.precision, "double|extended");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time direct summation against the closed form");
  bench_cmd->add_option("--hierarchy", bench.hierarchy)->required();
  bench_cmd->add_option("--p", bench.p)->required();
  bench_cmd->add_option("--ell", bench.ells, "One or more comma-separated values")->required()->delimiter(',');
  bench_cmd->add_option("--z", bench.z)->required();
  bench_cmd->add_option("--repeats", bench.repeats);
  bench_cmd->add_option("--warmup", bench.warmup);
  bench_cmd->add_flag("--include-bessel", bench.include_bessel, "Include Bessel generation in both timings");

  CoeffsArgs coeffs;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "Print exact boundary polynomial coefficients");
  coeffs_cmd->add_option("--hierarchy", coeffs.hierarchy)->required();
  coeffs_cmd->add_option("--p", coeffs.p)->required();
  coeffs_cmd->add_option("--ell", coeffs.ell)->required();
  coeffs_cmd->add_option("--format", coeffs.format)->check(CLI::IsMember({"plain", "json"}));

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate both sides over a range of z as CSV");
  sweep_cmd->add_option("--hierarchy", sweep.hierarchy)->required();
  sweep_cmd->add_option("--p", sweep.p)->required();
  sweep_cmd->add_option("--ell", sweep.ell)->required();
  sweep_cmd->add_option("--z-min", sweep.z_min)->required();
  sweep_cmd->add_option("--z-max", sweep.z_max)->required();
  sweep_cmd->add_option("--z-steps", sweep.z_steps)->required();
  sweep_cmd->add_option("--out", sweep.out_file, "Output file (default stdout)");
  sweep_cmd->add_option("--precision", sweep.precision, "double|extended");

  try {
    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    if (coeffs_cmd->parsed()) return cmd_coeffs(coeffs, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsageError;
}

}  // namespace sumrules::cli
