#pragma once

// Exact arithmetic for monomial (toric) weights phi = sum_j a_j log|z_j|^2 on the
// unit polydisc. Every integral in scope is a rational multiple of a power of pi.
//
// Conventions: weighted norms use e^{-p phi}, jumping numbers use e^{-2c phi};
// the two are related by p = 2c.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "effopen/rational.hpp"

namespace effopen::toric {

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<int> alpha);
  ExponentVector(std::initializer_list<int> alpha) : ExponentVector(std::vector<int>(alpha)) {}

  std::size_t size() const { return alpha_.size(); }
  int operator[](std::size_t j) const { return alpha_[j]; }
  const std::vector<int>& values() const { return alpha_; }
  int degree() const;

  /// Componentwise alpha >= other.
  bool dominates(const ExponentVector& other) const;

  auto operator<=>(const ExponentVector&) const = default;

 private:
  std::vector<int> alpha_;
};

std::string to_string(const ExponentVector& alpha);

struct GaussianRational {
  Rational re;
  Rational im;

  Rational norm_sq() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool operator==(const GaussianRational&) const = default;
};

/// a_j >= 0 for phi = sum_j a_j log|z_j|^2 <= 0 on the unit polydisc.
class MonomialWeight {
 public:
  explicit MonomialWeight(std::vector<Rational> a);
  MonomialWeight(std::initializer_list<Rational> a) : MonomialWeight(std::vector<Rational>(a)) {}

  std::size_t dimension() const { return a_.size(); }
  const Rational& operator[](std::size_t j) const { return a_[j]; }
  const std::vector<Rational>& coefficients() const { return a_; }
  bool is_zero() const;
  MonomialWeight scaled(const Rational& factor) const;

  bool operator==(const MonomialWeight&) const = default;

 private:
  std::vector<Rational> a_;
};

/// Finite sum of c_alpha z^alpha with Gaussian-rational coefficients; zero terms are never stored.
class PolyFunction {
 public:
  using TermMap = std::map<ExponentVector, GaussianRational>;

  explicit PolyFunction(std::size_t dimension);

  static PolyFunction monomial(ExponentVector alpha, GaussianRational coeff = {1, 0});
  static PolyFunction constant(std::size_t dimension, GaussianRational value = {1, 0});

  /// Adds coeff to the coefficient of z^alpha; a resulting zero coefficient removes the term.
  PolyFunction& add_term(const ExponentVector& alpha, const GaussianRational& coeff);

  std::size_t dimension() const { return dimension_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  bool operator==(const PolyFunction&) const = default;

 private:
  std::size_t dimension_;
  TermMap terms_;
};

/// coefficient * pi^{pi_power}, or +infinity for a divergent integral.
/// pi_power may be negative for kernel values such as (m+1)/pi.
class PiScaled {
 public:
  PiScaled() = default;
  PiScaled(Rational coefficient, int pi_power) : coefficient_(std::move(coefficient)), pi_power_(pi_power) {}
  static PiScaled infinity();

  bool is_infinite() const { return infinite_; }
  const Rational& coefficient() const { return coefficient_; }
  int pi_power() const { return pi_power_; }
  double value() const;

  /// 1/x; the reciprocal of +inf is 0 and of 0 is +inf.
  PiScaled reciprocal() const;

  /// Exact when both sides share a power of pi (or either is infinite), otherwise by value.
  std::partial_ordering operator<=>(const PiScaled& other) const;
  bool operator==(const PiScaled& other) const;

  friend PiScaled operator+(const PiScaled& x, const PiScaled& y);
  friend PiScaled operator*(const PiScaled& x, const PiScaled& y);

 private:
  Rational coefficient_{0};
  int pi_power_ = 0;
  bool infinite_ = false;
};

std::string to_string(const PiScaled& value);

/// Rational value or +infinity.
struct ExtendedRational {
  Rational value{0};
  bool infinite = false;

  static ExtendedRational inf() { return {Rational(0), true}; }
  double to_double() const;
  bool operator==(const ExtendedRational&) const = default;
};

std::string to_string(const ExtendedRational& value);

/// Monomial ideal given by a minimal antichain of generators.
class MonomialIdeal {
 public:
  MonomialIdeal() = default;
  /// Reduces the generators to a minimal antichain.
  MonomialIdeal(std::size_t dimension, std::vector<ExponentVector> generators);

  static MonomialIdeal unit(std::size_t dimension);
  static MonomialIdeal maximal(std::size_t dimension);
  static MonomialIdeal principal(ExponentVector generator);

  std::size_t dimension() const { return dimension_; }
  const std::vector<ExponentVector>& generators() const { return generators_; }
  bool contains(const ExponentVector& alpha) const;
  bool is_unit() const;

  bool operator==(const MonomialIdeal&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<ExponentVector> generators_;
};

std::string to_string(const MonomialIdeal& ideal);

/// \int_{Delta^n} |z^alpha|^2 dlambda = pi^n / prod_j (alpha_j + 1).
PiScaled monomial_norm_sq(const ExponentVector& alpha);

/// \int_{Delta^n} |F|^2 e^{-p phi} dlambda, exact; +infinity when some term has
/// alpha_j - p a_j <= -1. Cross terms vanish by rotational symmetry.
PiScaled weighted_norm_sq(const PolyFunction& f, const MonomialWeight& a, const Rational& p);

/// sup{c >= 0 : |F|^2 e^{-2c phi} is integrable near 0}
///   = min over alpha in supp F, j with a_j > 0 of (alpha_j + 1) / (2 a_j).
ExtendedRational jumping_number(const PolyFunction& f, const MonomialWeight& a);

/// Multiplier ideal of psi = sum_j b_j log|z_j|^2 at the origin: (z^gamma) with gamma_j the
/// least nonnegative integer > b_j - 1. For monomial weights I_+(psi) = I(psi), so `plus`
/// only records which ideal was requested.
MonomialIdeal multiplier_ideal(const std::vector<Rational>& b, bool plus);

/// (F, 0) in I(p phi)_0, i.e. alpha_j + 1 > p a_j for every alpha in supp F and every j.
bool membership(const PolyFunction& f, const MonomialWeight& a, const Rational& p);

/// Sum of |c_alpha|^2 ||z^alpha||^2 over alpha in supp F outside the ideal: the squared
/// norm of the orthogonal projection of F onto the monomials not in the ideal.
PiScaled projection_norm_sq(const PolyFunction& f, const MonomialIdeal& ideal);

}  // namespace effopen::toric
