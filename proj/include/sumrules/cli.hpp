#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sumrules/sum_rules.hpp"

namespace sumrules::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kIoError = 3,
};

struct BenchOptions {
  int repeats = 100;
  int warmup = 10;
  /// Time Bessel-sequence generation as part of both paths.
  bool include_bessel = false;
  /// Each repeat times a batch of calls at least this long.
  double min_batch_ns = 20'000.0;
};

/// Timing of direct summation against the closed form for one query, in
/// double precision. Timings are medians over repeats of the per-call mean
/// within each batch.
struct BenchReport {
  SumRuleQuery query;
  int repeats = 0;
  double mean_ns_direct = 0.0;
  double mean_ns_closed = 0.0;
  double speedup = 0.0;   // mean_ns_direct / mean_ns_closed
  double checksum = 0.0;  // closed-form value
};

BenchReport run_bench(const SumRuleQuery& q, const BenchOptions& options, const BesselOptions& bessel = {});

/// Formats with 17 significant digits, '.' as decimal separator.
std::string format_double(double value);

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name. Reads BESSEL_SUMRULES_MAX_N for the Bessel order ceiling.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumrules::cli
