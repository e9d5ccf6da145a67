#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "effopen/cli.hpp"
#include "effopen/errors.hpp"
#include "effopen/rational.hpp"
#include "effopen/scalars.hpp"

using namespace effopen;
using namespace effopen::cli;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> rows_of(const SweepTable& t) {
  std::vector<std::vector<std::string>> out;
  std::stringstream in(t.to_csv());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(split_csv_line(line));
  }
  return out;
}

std::size_t column(const SweepTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

std::string field_of(const std::string& text) {
  try {
    parse_spec_text(text);
  } catch (const SpecError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("spec round trip is the identity on random specs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(0, 4), num(-9, 9), den(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    ProblemSpec s;
    s.task = kTasks[trial % kTasks.size()];
    const int n = 1 + small(rng) % 3;
    for (int j = 0; j < n; ++j) s.weight.push_back(std::to_string(small(rng)) + "/" + std::to_string(den(rng)));
    const int terms = small(rng);
    for (int k = 0; k < terms; ++k) {
      TermSpec t;
      for (int j = 0; j < n; ++j) t.alpha.push_back(small(rng));
      t.re = std::to_string(num(rng)) + "/" + std::to_string(den(rng));
      t.im = std::to_string(num(rng));
      s.f.push_back(t);
    }
    s.t = "3/2";
    if (trial % 2) s.m = 1 + small(rng);
    if (trial % 3) s.R_grid = {0.0, 0.1 * small(rng), 12.5};
    if (trial % 5) s.B0 = 1.0 / (1 + small(rng));
    if (trial % 7) s.deltas = {1, 1 + small(rng)};
    if (trial % 4 == 0) s.mc = McSpec{rng(), 1000 + static_cast<std::size_t>(small(rng)), 4};
    if (trial % 3 == 0) s.suite = "full";
    const ProblemSpec back = parse_spec(json::parse(to_json(s).dump()));
    CHECK(back == s);
  }
}

TEST_CASE("spec validation names the offending field") {
  CHECK(field_of(R"({"task":"kernel","weight":["1/0"]})") == "weight[0]");
  CHECK(field_of(R"({"task":"kernel","weight":[0.5]})") == "weight[0]");
  CHECK(field_of(R"({"task":"kernel","weight":["1","2"],"f":[{"alpha":[1]}]})") == "f[0].alpha");
  CHECK(field_of(R"({"task":"kernel","weight":["1"],"f":[{"alpha":[1],"re":"x"}]})") == "f[0].re");
  CHECK(field_of(R"({"task":"kernel","weight":["1"],"f":[{"alpha":[-1]}]})") == "f[0].alpha[0]");
  CHECK(field_of(R"({"task":"bogus"})") == "task");
  CHECK(field_of(R"({"task":"theta"})") == "params.t");
  CHECK(field_of(R"({"task":"theta","params":{"t":1}})") == "params.t");
  CHECK(field_of(R"({"task":"dk","weight":["1"],"params":{"B0":2}})") == "params.B0");
  CHECK(field_of(R"({"task":"jm","weight":["1"],"params":{"deltas":[0]}})") == "params.deltas[0]");
  CHECK(field_of(R"({"task":"dk","weight":["1"],"params":{"typo":1}})") == "params.typo");
  CHECK(field_of(R"({"task":"dk"})") == "weight");
  CHECK(field_of(R"({"task":"dk", )") == "(json)");
}

TEST_CASE("exit code contract") {
  std::string msg;
  CHECK(exit_code_for(SpecError("weight[0]", "zero denominator"), msg) == kInputError);
  CHECK(msg.find("weight[0]") != std::string::npos);
  CHECK(exit_code_for(PreconditionError("jumping_number > 1/2", "diverges"), msg) == kPreconditionFailed);
  CHECK(msg.find("jumping_number > 1/2") != std::string::npos);
  CHECK(exit_code_for(DomainError("t <= 1"), msg) == kInputError);
  CHECK(exit_code_for(UnsupportedInput("n > 2"), msg) == kInputError);
  CHECK(exit_code_for(std::runtime_error("boom"), msg) == kCheckFailed);

  const auto divergent = parse_spec_text(R"({"task":"effective-p","weight":["1"]})");
  try {
    run_report(divergent);
    FAIL("expected a precondition failure");
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e, msg) == kPreconditionFailed);
  }
}

TEST_CASE("effective-p report on z^3") {
  const auto r = run_report(parse_spec_text(R"({"task":"effective-p","weight":["3"],"f":[{"alpha":[3]}]})"));
  CHECK(r["pass"] == true);
  CHECK(r["results"]["c1"] == json({{"kind", "exact"}, {"coeff", "1"}, {"pi_power", 1}}));
  CHECK(r["results"]["c2"] == json({{"kind", "exact"}, {"coeff", "1/4"}, {"pi_power", 1}}));
  CHECK(r["results"]["ratio"] == json({{"kind", "exact"}, {"coeff", "4"}, {"pi_power", 0}}));
  CHECK(r["results"]["p_effective"]["value"].get<double>() == doctest::Approx(scalars::theta_invert(4.0)).epsilon(1e-14));
  CHECK(r["results"]["p_effective"]["tolerance"].get<double>() > 0);
}

TEST_CASE("theta at 3/2 carries the exact marker") {
  const auto r = run_report(parse_spec_text(R"({"task":"theta","params":{"t":1.5}})"));
  CHECK(r["results"]["theta"] == json({{"kind", "exact"}, {"coeff", "1"}, {"pi_power", 0}}));
  const auto s = run_report(parse_spec_text(R"({"task":"theta","params":{"t":"2"}})"));
  CHECK(s["results"]["theta"]["kind"] == "approx");
  CHECK(s["results"]["theta"]["value"].get<double>() == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("kernel and jm reports carry discrepancy annotations") {
  const auto k = run_report(parse_spec_text(
      R"({"task":"kernel","weight":["1","0"],"f":[{"alpha":[1,0]},{"alpha":[0,2]}]})"));
  CHECK(k["results"]["kernel"] == json({{"kind", "exact"}, {"coeff", "3"}, {"pi_power", -2}}));
  REQUIRE(k["discrepancies"].size() == 1);
  CHECK(k["discrepancies"][0].get<std::string>().find("4/pi^2") != std::string::npos);

  const auto j = run_report(parse_spec_text(R"({"task":"jm","weight":["1"],"params":{"deltas":[1,1000]}})"));
  CHECK(j["pass"] == true);
  CHECK(j["results"]["rhs_sup"] == json({{"kind", "exact"}, {"coeff", "1000/1001"}, {"pi_power", 1}}));
  REQUIRE(j["discrepancies"].size() == 1);
  CHECK(j["discrepancies"][0].get<std::string>().find("1/pi") != std::string::npos);
}

TEST_CASE("exact values never appear as bare floats") {
  std::function<void(const json&)> walk = [&](const json& node) {
    if (node.is_number_float()) FAIL("bare float " << node.dump());
    if (node.is_object()) {
      if (node.value("kind", "") == "approx") {
        CHECK(node.contains("tolerance"));
        return;
      }
      for (const auto& [_, v] : node.items()) walk(v);
    }
    if (node.is_array()) {
      for (const auto& v : node) walk(v);
    }
  };
  for (const char* spec : {R"({"task":"effective-p","weight":["2"],"f":[{"alpha":[2]}]})",
                           R"({"task":"dk","weight":["1","1"],"params":{"R_grid":[0,5,10,15]}})",
                           R"({"task":"audit","params":{"m":2}})", R"({"task":"ode","params":{"deltas":[3]}})"}) {
    const auto r = run_report(parse_spec_text(spec));
    CHECK(r["pass"] == true);
    walk(r["results"]);
  }
}

TEST_CASE("sweep m = 1..20 of effective-p is strictly decreasing") {
  const auto spec = parse_spec_text(R"({"task":"effective-p","weight":["1"],"f":[{"alpha":[1]}]})");
  const auto table = run_sweep(spec, "m", parse_range("1:20:1"));
  CHECK(table.rows.size() == 20);
  CHECK(table.all_pass);
  const auto rows = rows_of(table);
  const std::size_t col = column(table, "p_effective");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][col]) < std::stod(rows[i - 1][col]));
}

TEST_CASE("sweep R for dk with a = (1) gives a constant pi column") {
  const auto spec = parse_spec_text(R"({"task":"dk","weight":["1"]})");
  const auto table = run_sweep(spec, "R", parse_range("0:20:1"));
  CHECK(table.rows.size() == 21);
  const std::size_t col = column(table, "value");
  for (const auto& row : table.rows) CHECK(std::stod(row[col]) == std::numbers::pi);
}

TEST_CASE("sweep t for theta matches theta_eval") {
  const auto spec = parse_spec_text(R"({"task":"theta","params":{"t":"2"}})");
  const auto table = run_sweep(spec, "t", parse_range("1.05:3:0.05"));
  CHECK(table.rows.size() == 40);
  const std::size_t tc = column(table, "t"), vc = column(table, "theta");
  for (const auto& row : table.rows) {
    const double t = std::stod(row[tc]);
    CHECK(std::stod(row[vc]) == doctest::Approx(scalars::theta_eval(t)).epsilon(1e-13));
  }
}

TEST_CASE("sweep parameter validation") {
  const auto spec = parse_spec_text(R"({"task":"dk","weight":["1"]})");
  CHECK_THROWS_AS(run_sweep(spec, "x", parse_range("0:1:1")), SpecError);
  CHECK_THROWS_AS(run_sweep(spec, "m", parse_range("1:2:1")), SpecError);
  CHECK_THROWS_AS(parse_range("1:2"), SpecError);
  CHECK_THROWS_AS(parse_range("2:1:1"), SpecError);
  CHECK_THROWS_AS(parse_range("0:1:0"), SpecError);
  CHECK_THROWS_AS(parse_range("a:1:1"), SpecError);
  const auto jm = parse_spec_text(R"({"task":"jm","weight":["1"]})");
  CHECK_THROWS_AS(run_sweep(jm, "delta", parse_range("0.5:2:0.5")), SpecError);
}

TEST_CASE("csv quoting follows RFC 4180") {
  SweepTable t;
  t.columns = {"a", "b"};
  t.rows = {{"x,y", "say \"hi\""}};
  CHECK(t.to_csv() == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n");
}
