#pragma once

// Batch command surface: JSON problem specs in, JSON reports and CSV sweeps out.
//
// Exact values are written as {"kind": "exact", "coeff": "p/q", "pi_power": k} (or
// {"kind": "exact", "infinite": true}); floating values as {"kind": "approx", "value": x,
// "tolerance": e}. Non-finite floats are written as the strings "inf", "-inf" or "nan".

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace effopen::cli {

using nlohmann::json;

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2, kPreconditionFailed = 3 };

/// Malformed or inconsistent problem spec; `field()` is a path such as "weight[1]".
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct TermSpec {
  std::vector<int> alpha;
  std::string re = "1";
  std::string im = "0";

  bool operator==(const TermSpec&) const = default;
};

struct McSpec {
  std::uint64_t seed = 20140301;
  std::size_t samples = 100000;
  std::size_t partitions = 8;

  bool operator==(const McSpec&) const = default;
};

inline const std::vector<std::string> kTasks = {"theta", "kernel", "effective-p", "dk",
                                                "jm",    "ode",    "audit",       "verify-all"};
inline const std::vector<std::string> kSweepParams = {"m", "R", "B0", "delta", "t"};

struct ProblemSpec {
  std::string task;
  std::vector<std::string> weight;  // rational strings
  std::vector<TermSpec> f;          // empty means F = 1
  std::optional<std::string> t;     // rational or decimal string
  std::optional<int> m;             // kernel, effective-p: replaces f and weight by z^m, (m); audit: instance
  std::vector<double> R_grid;
  std::optional<double> B0;
  std::vector<int> deltas;
  std::optional<McSpec> mc;
  std::optional<std::string> suite;  // verify-all: "fast" or "full"

  bool operator==(const ProblemSpec&) const = default;
};

/// Parses and validates; throws SpecError naming the offending field.
ProblemSpec parse_spec(const json& j);
/// Parses JSON text; syntax errors become SpecError with the parser's position.
ProblemSpec parse_spec_text(const std::string& text);
json to_json(const ProblemSpec& spec);

/// Runs the task. The report carries "pass" (all internal checks). Throws SpecError,
/// DomainError, UnsupportedInput on bad input and PreconditionError on a failed gate.
json run_report(const ProblemSpec& spec);

struct SweepRange {
  double start = 0;
  double stop = 0;
  double step = 0;
  std::vector<double> values() const;
};

/// "a:b:step" with step > 0 and a <= b; both ends included.
SweepRange parse_range(const std::string& text);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool all_pass = true;

  std::string to_csv() const;
};

/// One report per grid point with `param` substituted. Throws SpecError for an unknown
/// parameter or one the task does not use.
SweepTable run_sweep(const ProblemSpec& spec, const std::string& param, const SweepRange& range);

/// Maps an exception thrown by the functions above to the exit-code contract and writes a
/// diagnostic to `message`.
int exit_code_for(const std::exception& e, std::string& message);

}  // namespace effopen::cli
