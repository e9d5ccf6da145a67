#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace effopen::verify {

enum class Suite { kFast, kFull };

struct Options {
  Suite suite = Suite::kFast;
  std::uint64_t seed = 20140301;
  /// Replaces theta in the inequality criteria; used to check that a broken theta is caught.
  std::function<double(double)> theta_override;
};

enum class Status { kPass, kFail, kSkip };

struct CriterionResult {
  int id = 0;
  std::string title;
  Status status = Status::kFail;
  std::string detail;
  double seconds = 0;
};

std::string to_string(Status s);

/// Runs the acceptance criteria in order. Exceptions inside a criterion are caught and
/// reported as failures. The Monte Carlo criterion runs only in the full suite.
std::vector<CriterionResult> run_acceptance(const Options& options);

/// "PASS  3  title  detail". Timing is left out so the output is reproducible for a fixed seed.
std::string format_line(const CriterionResult& r);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace effopen::verify
