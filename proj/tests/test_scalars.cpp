#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "effopen/errors.hpp"
#include "effopen/scalars.hpp"

namespace sc = effopen::scalars;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Independent 50-digit oracle: Newton on Q'(x) = 2 log x - log(1-x) + 2/(2-x) - log(2-x).
Big big_q(const Big& x) { return 2 * x * log(x) + (1 - x) * log(1 - x) - x * log(2 - x); }

Big big_qmin_x() {
  Big x = 0.47;
  for (int i = 0; i < 60; ++i) {
    const Big q1 = 2 * log(x) - log(1 - x) + 2 / (2 - x) - log(2 - x);
    const Big q2 = 2 / x + 1 / (1 - x) + 2 / ((2 - x) * (2 - x)) + 1 / (2 - x);
    x -= q1 / q2;
  }
  return x;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("theta anchor values") {
  CHECK(sc::theta_eval(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(sc::theta_eval(2.0) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(sc::theta_eval_excess(0.5) - 1.0) < 1e-15);
}

TEST_CASE("theta domain errors") {
  CHECK_THROWS_AS(sc::theta_eval(1.0), effopen::DomainError);
  CHECK_THROWS_AS(sc::theta_eval(0.5), effopen::DomainError);
  CHECK_THROWS_AS(sc::theta_eval(std::nan("")), effopen::DomainError);
  CHECK_THROWS_AS(sc::theta_invert(0.5), effopen::InconsistentInput);
}

TEST_CASE("theta decreasing near 1 and blowing up") {
  double prev = INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const double u = 1e-6 + (0.5 - 1e-6) * i / 9999.0;
    const double v = sc::theta_eval_excess(u);
    REQUIRE(v < prev);
    prev = v;
  }
  CHECK(sc::theta_eval_excess(1e-8) > 1e7);
}

TEST_CASE("theta inversion round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logr(0.0, std::log(1e6));
  for (int i = 0; i < 500; ++i) {
    const double ratio = std::exp(logr(rng));
    const double u = sc::theta_invert_excess(ratio);
    CAPTURE(ratio);
    CHECK(sc::theta_eval_excess(u) == doctest::Approx(ratio).epsilon(1e-12));
  }
  CHECK(sc::theta_invert(1.0) == 1.5);
  CHECK(sc::theta_invert(4.0) < 1.0 + 1.0 / 3.0);
  // ratio = 1e6: the excess is ~2e-7 and is recovered to full precision
  const double u = sc::theta_invert_excess(1e6);
  CHECK(sc::theta_eval_excess(u) == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("inequality chain holds on a grid up to 1e3") {
  const auto grid = log_grid(1.0 + 1e-9, 1e3, 10000);
  const auto report = sc::theta_bound_check(grid);
  CHECK(report.inequalities.size() == 6);
  for (const auto& q : report.inequalities) {
    CAPTURE(q.name);
    CHECK(q.violations == 0);
    CHECK(q.min_slack > 0);
  }
  CHECK(report.all_hold());
}

TEST_CASE("mutated theta is caught") {
  const auto grid = log_grid(1.0 + 1e-6, 1e3, 2000);
  // exponent sign flipped
  auto flipped = [](double t) { return std::pow((t - 1.0) * (2.0 * t - 1.0), 1.0 / t); };
  CHECK_FALSE(sc::theta_bound_check(grid, flipped).all_hold());
}

TEST_CASE("Q minimum against a 50-digit oracle") {
  const Big xb = big_qmin_x();
  const double x_oracle = static_cast<double>(xb);
  const double eq_oracle = static_cast<double>(exp(big_q(xb)));
  // frozen from the oracle above
  CHECK(std::abs(x_oracle - 0.469117216183926) < 1e-14);
  CHECK(std::abs(eq_oracle - 0.287628508926545) < 1e-14);

  const auto m = sc::q_analysis(1e-12);
  CHECK(std::abs(m.x_min - x_oracle) < 1e-8);
  CHECK(std::abs(m.exp_q_min - eq_oracle) < 1e-12);
  CHECK(m.above_refined_bound);
  CHECK(m.above_crude_bound);
  CHECK(m.exp_q_min <= m.exp_q_half);
  CHECK(std::abs(m.exp_q_half - 0.288675134594813) < 1e-14);
  CHECK(std::abs(sc::crude_q_bound() - 0.276632594548738) < 1e-14);
}

TEST_CASE("Q relates to theta") {
  for (double t : {1.01, 1.2, 1.5, 2.0, 5.0, 40.0}) {
    CHECK(sc::p_eval(t) == doctest::Approx(sc::q_eval(1.0 / t).q).epsilon(1e-12));
    CHECK(sc::theta_eval(t) == doctest::Approx(std::exp(sc::p_eval(t)) * t / (t - 1.0)).epsilon(1e-12));
  }
  // convexity and the derivative formulas by central differences
  for (double x : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    const double h = 1e-6;
    const auto p = sc::q_eval(x);
    CHECK(p.q2 > 0);
    CHECK(p.q1 == doctest::Approx((sc::q_eval(x + h).q - sc::q_eval(x - h).q) / (2 * h)).epsilon(1e-6));
    CHECK(p.q2 == doctest::Approx((sc::q_eval(x + h).q1 - sc::q_eval(x - h).q1) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("Berndtsson comparison") {
  for (double ratio : {1.0, 2.0, 10.0, 100.0}) {
    const auto cmp = sc::berndtsson_compare(ratio, 1.0);
    CAPTURE(ratio);
    CHECK(cmp.epsilon0 == doctest::Approx(0.01));
    CHECK(cmp.p_berndtsson == doctest::Approx(1.0 + 1.0 / (200.0 * ratio)));
    CHECK(cmp.p_theta > cmp.p_berndtsson);
    CHECK(cmp.theta_dominates);
  }
  CHECK_THROWS_AS(sc::berndtsson_compare(1.0, 2.0), effopen::InconsistentInput);
  CHECK_THROWS_AS(sc::berndtsson_compare(0.0, 0.0), effopen::DomainError);
  CHECK_THROWS_AS(sc::berndtsson_compare(1.0, -1.0), effopen::DomainError);
}
