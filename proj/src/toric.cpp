#include "effopen/toric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "effopen/errors.hpp"

namespace effopen::toric {

ExponentVector::ExponentVector(std::vector<int> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw DomainError("exponent vector must have at least one entry");
  for (int v : alpha_) {
    if (v < 0) throw DomainError("exponent entries must be nonnegative");
  }
}

int ExponentVector::degree() const {
  int d = 0;
  for (int v : alpha_) d += v;
  return d;
}

bool ExponentVector::dominates(const ExponentVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (alpha_[j] < other.alpha_[j]) return false;
  }
  return true;
}

std::string to_string(const ExponentVector& alpha) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < alpha.size(); ++j) os << (j ? "," : "") << alpha[j];
  os << ')';
  return os.str();
}

MonomialWeight::MonomialWeight(std::vector<Rational> a) : a_(std::move(a)) {
  if (a_.empty()) throw DomainError("weight must have at least one coordinate");
  for (const auto& v : a_) {
    if (v < 0) throw DomainError("weight coefficients must be nonnegative");
  }
}

bool MonomialWeight::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& v) { return v == 0; });
}

MonomialWeight MonomialWeight::scaled(const Rational& factor) const {
  std::vector<Rational> out(a_);
  for (auto& v : out) v *= factor;
  return MonomialWeight(std::move(out));
}

PolyFunction::PolyFunction(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw DomainError("polynomial dimension must be at least 1");
}

PolyFunction PolyFunction::monomial(ExponentVector alpha, GaussianRational coeff) {
  PolyFunction f(alpha.size());
  f.add_term(alpha, coeff);
  return f;
}

PolyFunction PolyFunction::constant(std::size_t dimension, GaussianRational value) {
  return monomial(ExponentVector(std::vector<int>(dimension, 0)), std::move(value));
}

PolyFunction& PolyFunction::add_term(const ExponentVector& alpha, const GaussianRational& coeff) {
  if (alpha.size() != dimension_) throw DomainError("exponent dimension does not match polynomial");
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second.re += coeff.re;
    it->second.im += coeff.im;
  }
  if (it->second.is_zero()) terms_.erase(it);
  return *this;
}

PiScaled PiScaled::infinity() {
  PiScaled x;
  x.infinite_ = true;
  return x;
}

double PiScaled::value() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return to_double(coefficient_) * std::pow(std::numbers::pi, pi_power_);
}

PiScaled PiScaled::reciprocal() const {
  if (infinite_) return PiScaled(Rational(0), 0);
  if (coefficient_ == 0) return infinity();
  return PiScaled(1 / coefficient_, -pi_power_);
}

std::partial_ordering PiScaled::operator<=>(const PiScaled& other) const {
  if (infinite_ || other.infinite_) {
    if (infinite_ && other.infinite_) return std::partial_ordering::equivalent;
    return infinite_ ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  if (pi_power_ == other.pi_power_ || coefficient_ == 0 || other.coefficient_ == 0) {
    if (coefficient_ == 0 || other.coefficient_ == 0) {
      return coefficient_.sign() <=> other.coefficient_.sign();
    }
    if (coefficient_ < other.coefficient_) return std::partial_ordering::less;
    if (coefficient_ > other.coefficient_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  return value() <=> other.value();
}

bool PiScaled::operator==(const PiScaled& other) const {
  if (infinite_ || other.infinite_) return infinite_ == other.infinite_;
  if (coefficient_ == 0 && other.coefficient_ == 0) return true;
  return coefficient_ == other.coefficient_ && pi_power_ == other.pi_power_;
}

PiScaled operator+(const PiScaled& x, const PiScaled& y) {
  if (x.infinite_ || y.infinite_) return PiScaled::infinity();
  if (x.coefficient_ == 0) return y;
  if (y.coefficient_ == 0) return x;
  if (x.pi_power_ != y.pi_power_) throw DomainError("cannot add values with different powers of pi exactly");
  return PiScaled(x.coefficient_ + y.coefficient_, x.pi_power_);
}

PiScaled operator*(const PiScaled& x, const PiScaled& y) {
  if (x.infinite_ || y.infinite_) return PiScaled::infinity();
  return PiScaled(x.coefficient_ * y.coefficient_, x.pi_power_ + y.pi_power_);
}

std::string to_string(const PiScaled& value) {
  if (value.is_infinite()) return "inf";
  std::string c = format_rational(value.coefficient());
  if (value.pi_power() == 0 || value.coefficient() == 0) return c;
  std::string p = value.pi_power() == 1 ? "pi" : "pi^" + std::to_string(value.pi_power());
  if (value.pi_power() < 0) {
    return c + "*pi^" + std::to_string(value.pi_power());
  }
  return c == "1" ? p : c + "*" + p;
}

double ExtendedRational::to_double() const {
  return infinite ? std::numeric_limits<double>::infinity() : effopen::to_double(value);
}

std::string to_string(const ExtendedRational& value) {
  return value.infinite ? "inf" : format_rational(value.value);
}

MonomialIdeal::MonomialIdeal(std::size_t dimension, std::vector<ExponentVector> generators)
    : dimension_(dimension) {
  for (const auto& g : generators) {
    if (g.size() != dimension) throw DomainError("ideal generator dimension mismatch");
  }
  std::sort(generators.begin(), generators.end(),
            [](const ExponentVector& x, const ExponentVector& y) {
              return x.degree() != y.degree() ? x.degree() < y.degree() : x < y;
            });
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (const auto& g : generators) {
    bool redundant = std::any_of(generators_.begin(), generators_.end(),
                                 [&](const ExponentVector& kept) { return g.dominates(kept); });
    if (!redundant) generators_.push_back(g);
  }
  std::sort(generators_.begin(), generators_.end());
}

MonomialIdeal MonomialIdeal::unit(std::size_t dimension) {
  return MonomialIdeal(dimension, {ExponentVector(std::vector<int>(dimension, 0))});
}

MonomialIdeal MonomialIdeal::maximal(std::size_t dimension) {
  std::vector<ExponentVector> gens;
  for (std::size_t j = 0; j < dimension; ++j) {
    std::vector<int> e(dimension, 0);
    e[j] = 1;
    gens.emplace_back(std::move(e));
  }
  return MonomialIdeal(dimension, std::move(gens));
}

MonomialIdeal MonomialIdeal::principal(ExponentVector generator) {
  const std::size_t n = generator.size();
  return MonomialIdeal(n, {std::move(generator)});
}

bool MonomialIdeal::contains(const ExponentVector& alpha) const {
  return std::any_of(generators_.begin(), generators_.end(),
                     [&](const ExponentVector& g) { return alpha.dominates(g); });
}

bool MonomialIdeal::is_unit() const { return contains(ExponentVector(std::vector<int>(dimension_, 0))); }

std::string to_string(const MonomialIdeal& ideal) {
  std::string out = "<";
  for (std::size_t i = 0; i < ideal.generators().size(); ++i) {
    out += (i ? ", " : "") + to_string(ideal.generators()[i]);
  }
  return out + ">";
}

PiScaled monomial_norm_sq(const ExponentVector& alpha) {
  Integer den = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j) den *= alpha[j] + 1;
  return PiScaled(Rational(Integer(1), den), static_cast<int>(alpha.size()));
}

PiScaled weighted_norm_sq(const PolyFunction& f, const MonomialWeight& a, const Rational& p) {
  if (p < 0) throw DomainError("weighted_norm_sq requires p >= 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  const int n = static_cast<int>(f.dimension());
  Rational total = 0;
  for (const auto& [alpha, c] : f.terms()) {
    // \int_Delta |z|^{2 alpha_j} |z|^{-2 p a_j} = pi / (alpha_j - p a_j + 1) when positive.
    Rational term = c.norm_sq();
    for (std::size_t j = 0; j < f.dimension(); ++j) {
      Rational e = Rational(alpha[j] + 1) - p * a[j];
      if (e <= 0) return PiScaled::infinity();
      term /= e;
    }
    total += term;
  }
  return PiScaled(total, n);
}

ExtendedRational jumping_number(const PolyFunction& f, const MonomialWeight& a) {
  if (f.is_zero()) throw DomainError("jumping number of the zero function is undefined");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  std::optional<Rational> best;
  for (const auto& [alpha, c] : f.terms()) {
    for (std::size_t j = 0; j < a.dimension(); ++j) {
      if (a[j] == 0) continue;
      Rational v = Rational(alpha[j] + 1) / (2 * a[j]);
      if (!best || v < *best) best = v;
    }
  }
  if (!best) return ExtendedRational::inf();
  return {*best, false};
}

MonomialIdeal multiplier_ideal(const std::vector<Rational>& b, bool /*plus*/) {
  if (b.empty()) throw DomainError("multiplier_ideal requires at least one coordinate");
  std::vector<int> gamma(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] < 0) throw DomainError("multiplier_ideal requires b_j >= 0");
    Integer g = floor_plus_one(b[j] - 1);
    gamma[j] = g < 0 ? 0 : g.convert_to<int>();
  }
  return MonomialIdeal::principal(ExponentVector(std::move(gamma)));
}

bool membership(const PolyFunction& f, const MonomialWeight& a, const Rational& p) {
  if (p < 0) throw DomainError("membership requires p >= 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  for (const auto& [alpha, c] : f.terms()) {
    for (std::size_t j = 0; j < a.dimension(); ++j) {
      if (!(Rational(alpha[j] + 1) > p * a[j])) return false;
    }
  }
  return true;
}

PiScaled projection_norm_sq(const PolyFunction& f, const MonomialIdeal& ideal) {
  if (f.dimension() != ideal.dimension()) throw DomainError("polynomial and ideal dimensions differ");
  Rational total = 0;
  for (const auto& [alpha, c] : f.terms()) {
    if (ideal.contains(alpha)) continue;
    total += c.norm_sq() * monomial_norm_sq(alpha).coefficient();
  }
  return PiScaled(total, static_cast<int>(f.dimension()));
}

}  // namespace effopen::toric
