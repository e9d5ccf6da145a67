#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "effopen/errors.hpp"
#include "effopen/kernel.hpp"
#include "effopen/scalars.hpp"

using namespace effopen;
using namespace effopen::kernel;

namespace {

PolyFunction z_pow(int m) { return PolyFunction::monomial(ExponentVector{m}); }

PolyFunction z1_plus_z2sq() {
  PolyFunction f(2);
  f.add_term({1, 0}, {Rational(1), Rational(0)});
  f.add_term({0, 2}, {Rational(1), Rational(0)});
  return f;
}

}  // namespace

TEST_CASE("kernel of z^m with phi = m log|z|^2") {
  for (int m = 1; m <= 10; ++m) {
    const auto r = kernel_inv(z_pow(m), MonomialWeight{Rational(m)});
    CHECK(r.k_inv == PiScaled(Rational(1, m + 1), 1));
    CHECK(r.kernel() == PiScaled(Rational(m + 1), -1));
    CHECK(r.jumping == ExtendedRational{Rational(m + 1, 2 * m), false});
    CHECK(r.ideal == MonomialIdeal::principal({m + 1}));
    CHECK(r.projected_support.size() == 1);
  }
}

TEST_CASE("rotated linear form: only the z2 coefficient matters") {
  // |sin|^2 = 1/2 carried by the Gaussian rational (1+i)/2; a unimodular factor does not change K
  PolyFunction f(2);
  f.add_term({1, 0}, {Rational(1, 2), Rational(1, 2)});
  f.add_term({0, 1}, {Rational(1, 2), Rational(1, 2)});
  for (const Rational& delta : {Rational(1, 2), Rational(1), Rational(3)}) {
    const auto r = kernel_inv(f, MonomialWeight{delta, Rational(0)});
    CHECK(r.k_inv == PiScaled(Rational(1, 4), 2));
    CHECK(r.kernel() == PiScaled(Rational(4), -2));
  }
  // sin = 1/2: the z1 coefficient lies in the ideal and drops out
  for (const Rational& c1 : {Rational(0), Rational(866, 1000), Rational(7)}) {
    PolyFunction g(2);
    if (c1 != 0) g.add_term({1, 0}, {c1, Rational(0)});
    g.add_term({0, 1}, {Rational(1, 2), Rational(0)});
    CHECK(kernel_inv(g, MonomialWeight{Rational(2), Rational(0)}).kernel() == PiScaled(Rational(8), -2));
  }
}

TEST_CASE("third example: oracle value 3/pi^2") {
  const auto r = kernel_inv(z1_plus_z2sq(), MonomialWeight{Rational(1), Rational(0)});
  CHECK(r.jumping == ExtendedRational{Rational(1, 2), false});
  CHECK(r.k_inv == PiScaled(Rational(1, 3), 2));
  CHECK(r.kernel() == PiScaled(Rational(3), -2));
  CHECK(r.kernel() != PiScaled(Rational(4), -2));
}

TEST_CASE("c_fp") {
  for (int m = 1; m <= 20; ++m) {
    const Rational p = 1 + Rational(1, m);
    CHECK(c_fp(z_pow(m), MonomialWeight{Rational(m)}, p) == PiScaled(Rational(1, m + 1), 1));
    CHECK(c_fp(z_pow(m), MonomialWeight{Rational(m)}, p - Rational(1, 1000)).value() == 0.0);
  }
  CHECK(c_fp(z1_plus_z2sq(), MonomialWeight{Rational(1), Rational(0)}, Rational(1)) == PiScaled(Rational(1, 3), 2));
}

TEST_CASE("classical Bergman kernel") {
  CHECK(classical_bergman(1) == PiScaled(Rational(1), -1));
  CHECK(classical_bergman(2) == PiScaled(Rational(1), -2));
  const double off[] = {0.1};
  CHECK_THROWS_AS(classical_bergman(1, off), UnsupportedInput);
  CHECK(kernel_inv(PolyFunction::constant(1), MonomialWeight{Rational(1)}).kernel() <= classical_bergman(1));
  CHECK(kernel_inv(PolyFunction::constant(2), MonomialWeight{Rational(0), Rational(0)}).k_inv ==
        PiScaled(Rational(1), 2));
}

TEST_CASE("sharpness product is 1/(1 - 1/p)") {
  for (const Rational& p : {Rational(2), Rational(3, 2), Rational(11, 10)}) {
    const PiScaled v = sharpness_product(p);
    CHECK(v == PiScaled(p / (p - 1), 0));
  }
  CHECK_THROWS_AS(sharpness_product(Rational(1)), DomainError);
}

TEST_CASE("effectiveness pipeline on z^m") {
  for (int m = 1; m <= 100; ++m) {
    const auto r = effective_p_report(z_pow(m), MonomialWeight{Rational(m)});
    CAPTURE(m);
    CHECK(r.c1 == PiScaled(Rational(1), 1));
    CHECK(r.c2 == PiScaled(Rational(1, m + 1), 1));
    CHECK(r.ratio == m + 1);
    CHECK(r.p_effective < 1.0 + 1.0 / m);
    CHECK(r.p_effective > 1.0);
    CHECK(r.membership_verdict);
    CHECK_FALSE(toric::membership(z_pow(m), MonomialWeight{Rational(m)}, 1 + Rational(1, m)));
    CHECK(scalars::theta_eval(1.0 + 1.0 / m) <= m + 1);
  }
}

TEST_CASE("effectiveness pipeline edge cases") {
  const auto half = effective_p_report(PolyFunction::constant(1), MonomialWeight{Rational(1, 2)});
  CHECK(half.c1 == PiScaled(Rational(2), 1));
  CHECK(half.c2 == PiScaled(Rational(1), 1));
  CHECK(half.p_effective == doctest::Approx(scalars::theta_invert(2.0)));
  CHECK(half.membership_verdict);

  const auto flat = effective_p_report(PolyFunction::constant(2), MonomialWeight{Rational(0), Rational(0)});
  CHECK(flat.ratio == 1.0);
  CHECK(flat.p_effective == 1.5);
  CHECK(flat.membership_verdict);

  try {
    effective_p_report(PolyFunction::constant(1), MonomialWeight{Rational(1)});
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.gate() == "jumping_number > 1/2");
  }
}

TEST_CASE("C2 <= ||F||_0^2 <= C1 and monotonicity in the weight") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> deg(0, 3), num(0, 5), den(1, 4);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    PolyFunction f(2);
    for (int k = 0; k < 3; ++k) f.add_term({deg(rng), deg(rng)}, {Rational(num(rng) + 1), Rational(0)});
    const MonomialWeight a{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    const PiScaled c1 = toric::weighted_norm_sq(f, a, Rational(1));
    const PiScaled plain = toric::weighted_norm_sq(f, a, Rational(0));
    const PiScaled c2 = kernel_inv(f, a).k_inv;
    CHECK(c2 <= plain);
    CHECK(plain <= c1);
    if (!c1.is_infinite()) ++checked;
  }
  CHECK(checked > 20);
  for (int m = 1; m <= 10; ++m) {
    const double p1 = effective_p_report(z_pow(m), MonomialWeight{Rational(m)}).p_effective;
    const double p2 = effective_p_report(z_pow(m), MonomialWeight{Rational(m + 1, 2) + Rational(m, 2)}).p_effective;
    CHECK(p2 <= p1);
  }
}

TEST_CASE("kernel_inv equals c_fp at the jumping ideal") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> deg(0, 3), num(1, 6), den(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    PolyFunction f(2);
    for (int k = 0; k < 2; ++k) f.add_term({deg(rng), deg(rng)}, {Rational(1), Rational(k)});
    const MonomialWeight a{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    const auto r = kernel_inv(f, a);
    CHECK(r.k_inv == c_fp(f, a, 2 * r.jumping.value));
  }
}

TEST_CASE("semicontinuity checker") {
  using Member = std::pair<PolyFunction, MonomialWeight>;
  std::vector<Member> shrinking;
  for (int m = 2; m <= 20; ++m) shrinking.emplace_back(z_pow(1), MonomialWeight{1 - Rational(1, m)});
  const auto holds = semicontinuity_check(shrinking, {z_pow(1), MonomialWeight{Rational(1)}});
  CHECK(holds.verdict == SemicontinuityVerdict::kHolds);
  CHECK(holds.conclusion_ok);
  CHECK(holds.stated_hypothesis_ok);

  std::vector<Member> constant(5, Member{z_pow(2), MonomialWeight{Rational(1)}});
  CHECK(semicontinuity_check(constant, constant.front()).verdict == SemicontinuityVerdict::kHolds);

  // toric stand-in for the rotated family: F_m = z1 + z2/m, phi_m = (1/2) log|z1|^2, limit F = z1
  std::vector<Member> degenerating;
  for (int m = 1; m <= 20; ++m) {
    PolyFunction f(2);
    f.add_term({1, 0}, {Rational(1), Rational(0)});
    f.add_term({0, 1}, {Rational(1, m), Rational(0)});
    degenerating.emplace_back(f, MonomialWeight{Rational(1, 2), Rational(0)});
  }
  const auto viol = semicontinuity_check(degenerating, {PolyFunction::monomial({1, 0}),
                                                        MonomialWeight{Rational(1, 2), Rational(0)}});
  CHECK(viol.members.back().k_inv == PiScaled(Rational(1, 800), 2));
  CHECK_FALSE(viol.conclusion_ok);
  CHECK(viol.verdict == SemicontinuityVerdict::kHypothesisViolation);
  CHECK_FALSE(viol.proof_hypothesis_ok);
  CHECK(to_string(viol.verdict) == "hypothesis-violation");

  CHECK_THROWS_AS(semicontinuity_check(std::span<const Member>{}, constant.front()), DomainError);
}

TEST_CASE("Monte Carlo weighted norms") {
  mc::McConfig cfg;
  cfg.samples = 100000;
  for (int m : {1, 3}) {
    const auto est = mc_weighted_norm(z_pow(m), MonomialWeight{Rational(m)}, Rational(1), cfg);
    CHECK_FALSE(est.divergent);
    CHECK(est.within(std::numbers::pi, 4.0));
  }
  const auto vol = mc_weighted_norm(PolyFunction::constant(2), MonomialWeight{Rational(1), Rational(2)}, Rational(0), cfg);
  CHECK(vol.within(std::numbers::pi * std::numbers::pi, 4.0));

  cfg.samples = 20000;
  const auto div = mc_weighted_norm(z1_plus_z2sq(), MonomialWeight{Rational(1), Rational(0)}, Rational(1), cfg);
  CHECK(div.divergent);
  CHECK(std::isinf(div.mean));
  REQUIRE(div.refinement.size() == 4);
  for (std::size_t i = 1; i < div.refinement.size(); ++i) {
    CHECK(div.refinement[i].second > div.refinement[i - 1].second);
  }
  cfg.samples = 0;
  CHECK_THROWS_AS(mc_weighted_norm(z_pow(1), MonomialWeight{Rational(1)}, Rational(1), cfg), DomainError);
}

TEST_CASE("evaluate") {
  const std::complex<double> z[] = {{0.5, 0.0}, {0.0, 1.0}};
  CHECK(std::abs(evaluate(z1_plus_z2sq(), z) - std::complex<double>(-0.5, 0.0)) < 1e-15);
}
