#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "effopen/cli.hpp"
#include "effopen/verify.hpp"

using namespace effopen;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cli::SpecError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw cli::SpecError(path, "cannot write file");
  out << text;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EFFOPEN_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return verify::Options{}.seed;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  verify::Options options;
  options.suite = suite == "full" ? verify::Suite::kFull : verify::Suite::kFast;
  options.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const auto results = verify::run_acceptance(options);
  for (const auto& r : results) std::cout << verify::format_line(r) << '\n';
  const bool ok = verify::all_passed(results);
  std::cout << (ok ? "verify: all criteria passed" : "verify: FAILED") << '\n';
  std::cerr << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  return ok ? cli::kPass : cli::kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective strong openness: exact kernels, thresholds and volume bounds"};
  app.require_subcommand(1);

  std::string spec_path, out_path, param, range, suite = "fast";
  std::uint64_t seed = default_seed();

  auto* report = app.add_subcommand("report", "Run the task in a JSON problem spec and write a JSON report");
  report->add_option("spec", spec_path, "Problem spec (JSON)")->required();
  report->add_option("-o,--output", out_path, "Output file (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "Repeat a task over a parameter grid and write CSV");
  sweep->add_option("spec", spec_path, "Problem spec (JSON)")->required();
  sweep->add_option("--param", param, "m, R, B0, delta or t")->required();
  sweep->add_option("--range", range, "a:b:step, both ends included")->required();
  sweep->add_option("-o,--output", out_path, "Output file (default: stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify_cmd->add_option("--seed", seed, "Monte Carlo master seed (default: $EFFOPEN_SEED or 20140301)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  try {
    if (*verify_cmd) return run_verify(suite, seed);
    const cli::ProblemSpec spec = cli::parse_spec_text(read_file(spec_path));
    if (*report) {
      const auto json = cli::run_report(spec);
      write_output(out_path, json.dump(2) + "\n");
      return json["pass"].get<bool>() ? cli::kPass : cli::kCheckFailed;
    }
    const auto table = cli::run_sweep(spec, param, cli::parse_range(range));
    write_output(out_path, table.to_csv());
    return table.all_pass ? cli::kPass : cli::kCheckFailed;
  } catch (const std::exception& e) {
    std::string message;
    const int code = cli::exit_code_for(e, message);
    std::cerr << message << '\n';
    return code;
  }
}
