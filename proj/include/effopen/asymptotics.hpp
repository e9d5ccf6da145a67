#pragma once

// Sublevel and band volumes of monomial weights on the unit polydisc.
//
// With t_j = -log|z_j|^2 the Lebesgue measure of the polydisc becomes pi^n prod e^{-t_j} dt_j
// (angles integrated out), so |z^alpha|^2 dlambda turns into independent Exp(alpha_j + 1)
// variables and {phi < -R} into {sum a_j t_j > R}. Every volume below is therefore a tail of a
// weighted sum of exponentials, which is an exponential polynomial in R with rational data.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effopen/kernel.hpp"
#include "effopen/mc.hpp"
#include "effopen/toric.hpp"

namespace effopen::asymptotics {

using toric::MonomialWeight;
using toric::PiScaled;
using toric::PolyFunction;

/// coeff * R^power * e^{-rate R}
struct ExpTerm {
  Rational coeff;
  int power = 0;
  Rational rate;
};

/// Finite sum of ExpTerms, kept merged by (power, rate).
class ExpPolynomial {
 public:
  ExpPolynomial() = default;

  static ExpPolynomial exponential_density(const Rational& rate);
  static ExpPolynomial constant(const Rational& c);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Rational& coeff, int power, const Rational& rate);
  ExpPolynomial& operator+=(const ExpPolynomial& other);
  ExpPolynomial scaled(const Rational& factor) const;

  /// Density of X + E for X with this density and E ~ Exp(rate) independent.
  ExpPolynomial convolve_exponential(const Rational& rate) const;
  /// \int_R^inf of this density; every rate must be positive.
  ExpPolynomial tail() const;

  double evaluate(double R) const;
  /// e^{s R} f(R + shift), combining exponents exactly so that matching rates cancel.
  double evaluate_scaled(const Rational& s, double R, double shift = 0.0) const;

 private:
  std::vector<ExpTerm> terms_;
};

/// Density of sum_j E_j with E_j ~ Exp(rates_j) independent; rates must be positive.
ExpPolynomial hypoexponential_density(std::span<const Rational> rates);

/// P(sum_j c_j T_j > R) for R >= 0, T_j ~ Exp(rates_j) independent, c_j of any sign.
ExpPolynomial weighted_exponential_tail(std::span<const Rational> coeffs, std::span<const Rational> rates);

struct SublevelQuery {
  MonomialWeight a;
  double R = 0;
  std::optional<double> B0;
  std::optional<double> r;

  /// Throws DomainError on R < 0, B0 outside (0,1] or r outside (0,1).
  void validate() const;
};

/// mu({phi < -R}) = pi^n * tail(R) with tail = P(sum_j a_j T_j > R), T_j ~ Exp(1).
struct SublevelLaw {
  int pi_power = 0;
  ExpPolynomial tail;

  double volume(double R) const;
  /// e^{s R} mu({phi < -R}).
  double scaled_volume(const Rational& s, double R) const;
};

/// Throws DomainError when a == 0.
SublevelLaw sublevel_law(const MonomialWeight& a);
double sublevel_volume(const MonomialWeight& a, double R);
/// mu({-(R+B0) < phi < -R}); B0 must lie in (0,1].
double band_volume(const MonomialWeight& a, double R, double B0);

struct AsymptotePoint {
  double R = 0;
  double value = 0;
  double bound = 0;
  double slack = 0;  // value - bound
};

struct AsymptoteSeries {
  std::string name;
  std::vector<AsymptotePoint> points;
  double liminf_estimate = 0;  // min over points with R >= 10 (all points if none)
  double extrapolation = 0;    // Aitken fit over the last three points; +inf for growing series
  PiScaled bound;
  bool compared = false;  // false when the hypothesis gate failed
  bool bound_holds = false;
};

struct AsymptoteReport {
  std::vector<AsymptoteSeries> series;
  PiScaled lower_bound;
  bool hypothesis_ok = false;
  std::vector<std::string> notes;

  const AsymptoteSeries& find(const std::string& name) const;
};

/// Series reported:
///   band      e^{R+B0} (1/B0) \int_{band} |F|^2, bound K^{-1}_{phi,F}(0)
///   sublevel  e^R \int_{phi<-R} |F|^2 (mu for F = 1), bound K^{-1}_{phi,F}(0)
///   dk_form   r^{-2c} mu({phi < log r}) at R = -2c log r, c = jumping_number(1, a),
///             bound K^{-1}_{2c phi,1}(0)
/// The first two are compared only when |F|^2 e^{-phi} is not integrable near 0.
AsymptoteReport dk_asymptote_report(const PolyFunction& f, const MonomialWeight& a, std::span<const double> R_grid,
                                    double B0);

struct JmDeltaRow {
  int delta = 0;
  Rational weight_jumping;  // jumping number of F^{1+delta} for the piecewise weight
  PiScaled k_inv;           // K^{-1} of the piecewise weight with F^{1+delta}
  PiScaled sup_factor;      // sup_D e^{(1+delta) max{psi, 2 log|F|}}
  PiScaled c_value;         // k_inv / sup_factor
  PiScaled rhs;             // c_value / (1 + 1/delta)
  double norm_exact = 0;    // \int |F^{1+delta}|^2 e^{-s W} at s just below the threshold
  double norm_quadrature = 0;
  bool diverges_at_threshold = false;
};

struct JmReport {
  AsymptoteReport asymptote;  // series "lhs": e^R mu({2c psi - log|F|^2 < -R})
  Rational jumping;           // c^F_0(psi)
  std::vector<Rational> normalized_weight;  // 2c a
  std::vector<JmDeltaRow> deltas;
  PiScaled rhs_sup;
  int best_delta = 0;
};

/// Optimal effectiveness of the J-M volume bound for psi = sum a_j log|z_j|^2 and F a monomial
/// (or 1) on the unit polydisc, n <= 2. psi is normalized to 2c psi with c the jumping number
/// of F, so R = -2 log r gives the 1/r^2 form. Throws UnsupportedInput for non-monomial F or
/// n > 2, DomainError for an empty grid or a delta < 1.
JmReport jm_asymptote_report(const PolyFunction& f, const MonomialWeight& a, std::span<const int> delta_list,
                             std::span<const double> R_grid);

/// Exact cone integral \int_{cone(r1, r2)} e^{-f.t} dt = |det(r1, r2)| / (f.r1 f.r2), or +inf.
double cone_integral(std::span<const double, 2> r1, std::span<const double, 2> r2, std::span<const double, 2> f);
/// The same integral as \int dangle / f(omega)^2 by adaptive Gauss-Kronrod quadrature.
double cone_integral_quadrature(std::span<const double, 2> r1, std::span<const double, 2> r2,
                                std::span<const double, 2> f);

using WeightEvaluator = std::function<double(std::span<const std::complex<double>>)>;

/// Monte Carlo estimate of mu({weight < -R}) on the unit polydisc Delta^n by uniform sampling.
mc::McEstimate mc_sublevel(const WeightEvaluator& weight, std::size_t n, double R, const mc::McConfig& config);

struct RotatedFamilyReport {
  double theta = 0;
  Rational delta;
  mc::McEstimate norm;       // \int_{Delta^2} |z1|^2 e^{-phi_{theta,delta}}
  double threshold = 0;      // 2 pi^2
  bool below_threshold = false;
  bool divergent_at_inverse_delta = false;  // exact gate at exponent 1/delta
  bool integrable_at_one = false;           // exact gate at exponent 1
};

/// phi_{theta,delta} = 2 delta log|z1 cos(theta) + z2 sin(theta)| with F = z1. Sampling uses
/// w = z1 cos(theta) + z2 sin(theta) and a |w|^{-2 delta} proposal, so weights stay bounded.
/// The integrability gates are exact: in (w, z2) the weight is monomial, a = (delta, 0), and
/// F = (w - z2 sin(theta)) / cos(theta). Requires 0 < delta < 1 and 0 < theta < pi/4.
RotatedFamilyReport rotated_family_check(double theta, const Rational& delta, const mc::McConfig& config);

}  // namespace effopen::asymptotics
