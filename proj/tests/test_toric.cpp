#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "effopen/errors.hpp"
#include "effopen/toric.hpp"

using namespace effopen;
using namespace effopen::toric;

namespace {

// Brute-force oracle: 1-D integrals \int_0^1 r^{2 alpha + 1 - 2 p a} 2 pi dr, multiplied out.
PiScaled norm_by_radial_integrals(const ExponentVector& alpha, const MonomialWeight& a, const Rational& p) {
  Rational prod = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const Rational exponent = 2 * alpha[j] + 1 - 2 * p * a[j];  // r^exponent dr
    if (exponent <= -1) return PiScaled::infinity();
    prod *= Rational(2) / (exponent + 1);  // 2 pi \int_0^1 r^e dr = 2 pi / (e + 1)
  }
  return PiScaled(prod, static_cast<int>(alpha.size()));
}

}  // namespace

TEST_CASE("exponent vectors and weights validate") {
  CHECK_THROWS_AS(ExponentVector({-1, 0}), DomainError);
  CHECK_THROWS_AS(ExponentVector(std::vector<int>{}), DomainError);
  CHECK_THROWS_AS(MonomialWeight({Rational(-1)}), DomainError);
  CHECK(ExponentVector({2, 3}).degree() == 5);
  CHECK(ExponentVector({2, 3}).dominates(ExponentVector({1, 3})));
  CHECK_FALSE(ExponentVector({2, 3}).dominates(ExponentVector({3, 0})));
}

TEST_CASE("PiScaled arithmetic and ordering") {
  const PiScaled a(Rational(1, 2), 1), b(Rational(1, 3), 1);
  CHECK(a > b);
  CHECK(a + b == PiScaled(Rational(5, 6), 1));
  CHECK(a * b == PiScaled(Rational(1, 6), 2));
  CHECK(a.reciprocal() == PiScaled(Rational(2), -1));
  CHECK(PiScaled::infinity() > a);
  CHECK(PiScaled::infinity().reciprocal() == PiScaled(Rational(0), 0));
  CHECK(PiScaled(Rational(0), 0).reciprocal().is_infinite());
  CHECK(a.value() == doctest::Approx(std::numbers::pi / 2));
  CHECK(to_string(PiScaled(Rational(3), -2)) == "3*pi^-2");
}

TEST_CASE("monomial norms") {
  CHECK(monomial_norm_sq(ExponentVector{0}) == PiScaled(Rational(1), 1));
  CHECK(monomial_norm_sq(ExponentVector{3}) == PiScaled(Rational(1, 4), 1));
  CHECK(monomial_norm_sq(ExponentVector{0, 2}) == PiScaled(Rational(1, 3), 2));
}

TEST_CASE("weighted norm matches radial integral oracle on random data") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(0, 4), num(0, 12), den(1, 6), dim(1, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = dim(rng);
    std::vector<int> alpha(n);
    std::vector<Rational> a(n);
    for (int j = 0; j < n; ++j) {
      alpha[j] = deg(rng);
      a[j] = Rational(num(rng), den(rng));
    }
    const Rational p(num(rng), den(rng));
    const ExponentVector ev(alpha);
    const MonomialWeight w(a);
    const auto f = PolyFunction::monomial(ev, {Rational(2), Rational(1)});  // |c|^2 = 5
    const PiScaled expected = norm_by_radial_integrals(ev, w, p);
    const PiScaled got = weighted_norm_sq(f, w, p);
    CAPTURE(trial);
    if (expected.is_infinite()) {
      CHECK(got.is_infinite());
      CHECK_FALSE(membership(f, w, p));
    } else {
      CHECK(got == PiScaled(expected.coefficient() * 5, expected.pi_power()));
      CHECK(membership(f, w, p));
    }
  }
}

TEST_CASE("cross terms vanish") {
  PolyFunction f(2);
  f.add_term({1, 0}, {Rational(1), Rational(0)});
  f.add_term({0, 1}, {Rational(0), Rational(1)});
  CHECK(weighted_norm_sq(f, MonomialWeight{Rational(0), Rational(0)}, Rational(0)) == PiScaled(Rational(1), 2));
  f.add_term({1, 0}, {Rational(-1), Rational(0)});
  CHECK(f.is_monomial());
}

TEST_CASE("jumping numbers") {
  using E = ExtendedRational;
  CHECK(jumping_number(PolyFunction::constant(1), MonomialWeight{Rational(1)}) == E{Rational(1, 2), false});
  CHECK(jumping_number(PolyFunction::monomial({3}), MonomialWeight{Rational(3)}) == E{Rational(2, 3), false});
  CHECK(jumping_number(PolyFunction::constant(2), MonomialWeight{Rational(0), Rational(0)}).infinite);
  // minimum over terms and coordinates
  PolyFunction f(2);
  f.add_term({1, 0}, {Rational(1), Rational(0)});
  f.add_term({0, 2}, {Rational(1), Rational(0)});
  CHECK(jumping_number(f, MonomialWeight{Rational(1), Rational(0)}) == E{Rational(1, 2), false});
  // integrable strictly below, not at the jumping number
  const auto c = jumping_number(f, MonomialWeight{Rational(1), Rational(1)});
  CHECK(membership(f, MonomialWeight{Rational(1), Rational(1)}, 2 * c.value * Rational(99, 100)));
  CHECK_FALSE(membership(f, MonomialWeight{Rational(1), Rational(1)}, 2 * c.value));
}

TEST_CASE("multiplier ideals of monomial weights") {
  CHECK(multiplier_ideal({Rational(1, 2)}, false).is_unit());
  CHECK(multiplier_ideal({Rational(1)}, true) == MonomialIdeal::principal({1}));
  CHECK(multiplier_ideal({Rational(5, 2), Rational(1, 3)}, false) == MonomialIdeal::principal({2, 0}));
  const auto ideal = multiplier_ideal({Rational(2), Rational(1)}, true);
  CHECK(ideal.contains({2, 1}));
  CHECK(ideal.contains({3, 4}));
  CHECK_FALSE(ideal.contains({1, 5}));
}

TEST_CASE("ideal membership agrees with the integrability test") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> deg(0, 5), num(0, 9), den(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> b{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    const ExponentVector alpha{deg(rng), deg(rng)};
    const auto ideal = multiplier_ideal(b, false);
    const bool integrable = membership(PolyFunction::monomial(alpha), MonomialWeight(b), Rational(1));
    CHECK(ideal.contains(alpha) == integrable);
  }
}

TEST_CASE("minimal generators and projection") {
  const MonomialIdeal ideal(2, {ExponentVector{2, 0}, ExponentVector{3, 1}, ExponentVector{0, 3}});
  CHECK(ideal.generators().size() == 2);
  PolyFunction f(2);
  f.add_term({1, 0}, {Rational(1), Rational(0)});
  f.add_term({0, 4}, {Rational(1), Rational(0)});
  CHECK(projection_norm_sq(f, ideal) == PiScaled(Rational(1, 2), 2));
  CHECK(projection_norm_sq(f, MonomialIdeal::unit(2)).value() == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS(weighted_norm_sq(PolyFunction::constant(2), MonomialWeight{Rational(1)}, Rational(1)));
  CHECK_THROWS(jumping_number(PolyFunction::constant(1), MonomialWeight{Rational(1), Rational(1)}));
  PolyFunction f(2);
  CHECK_THROWS(f.add_term({1}, {Rational(1), Rational(0)}));
}
