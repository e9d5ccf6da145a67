#pragma once

// Closed-form pieces of the L^2 extension construction: the cut-off b_{t0}, the smooth
// convex family v_{t0,eps}, the two ODE systems with their explicit solutions, the
// constant factors they produce, and a numerical audit of the summation chain that
// turns the extension estimate into theta(p) <= C1/C2.

#include <optional>
#include <span>
#include <vector>

#include "effopen/rational.hpp"

namespace effopen::weights {

/// b_{t0}(t) = \int_{-inf}^t (1/B0) 1_{(-t0-B0, -t0)}(s) ds.
double b_eval(double t, double t0, double B0);

struct WeightFamilyParams {
  double t0 = 1.0;
  double B0 = 1.0;
  double epsilon = 0.1;

  /// Throws DomainError unless t0 > 0, B0 in (0,1], epsilon in (0, B0/8).
  void validate() const;
};

struct WeightValue {
  double v = 0;
  double v1 = 0;
  double v2 = 0;
};

/// v_{t0,eps} built from v'' = (1/(B0 - 4 eps)) 1_{(-t0-B0+2eps, -t0-2eps)} * rho_{eps/4}, with
/// rho the normalized bump exp(-1/(1-x^2)) rescaled to (-eps/4, eps/4), integrated twice and
/// shifted so that v(t) = t for t >= -t0-eps.
WeightValue weight_family_eval(double t, const WeightFamilyParams& params);

/// sup v'' = 1/(B0 - 4 eps) for the construction above.
double weight_family_sup_v2(const WeightFamilyParams& params);

/// Cumulative moments of the normalized unit bump, tabulated once by adaptive quadrature.
class BumpMoments {
 public:
  static const BumpMoments& instance();

  /// \int_{-1}^{x} y^k rho(y) dy for k = 0, 1, 2; clamped outside [-1, 1].
  double cumulative(int k, double x) const;
  double density(double x) const;
  double second_moment() const { return total_[2]; }

 private:
  BumpMoments();
  double normalizer_ = 0;
  double step_ = 0;
  std::vector<double> nodes_;
  std::vector<double> table_[3];
  double total_[3] = {0, 0, 0};
};

/// Explicit solution (u, s) of
///   s' - s u' = 1,   (s + s'^2/(u'' s - s'')) e^{u - t} = 1,
/// with u = -log(A - e^{-t}) and s = (A t + A/delta)/(A - e^{-t}) - 1, A = 1 + 1/delta.
/// delta = nullopt gives A = 1: u = -log(1 - e^{-t}), s = t/(1 - e^{-t}) - 1.
class OdeWitness {
 public:
  explicit OdeWitness(std::optional<int> delta = std::nullopt);

  std::optional<int> delta() const { return delta_; }
  /// Lower bound for s: 0, or 1/delta.
  double s_floor() const { return c_; }

  struct Jet {
    double value = 0;
    double d1 = 0;
    double d2 = 0;
  };
  Jet u(double t) const;
  Jet s(double t) const;

 private:
  std::optional<int> delta_;
  double c_ = 0;  // 1/delta
  double A_ = 1;
};

OdeWitness gz_witness();
OdeWitness gzjm_witness(int delta);

struct OdeResidualReport {
  double max_residual_first = 0;   // |s' - s u' - 1|
  double max_residual_second = 0;  // |(s + s'^2/(u''s - s'')) e^{u-t} - 1|
  double min_margin = 0;           // min (u'' s - s'')
  double min_s_minus_floor = 0;    // min (s - s_floor)
  double max_u1 = 0;               // max u'
  double max_fd_relative_error = 0;
  bool ok(double tolerance) const;
};

/// Residuals on the grid from closed-form derivatives; central differences (h = 1e-5, taken in
/// 50-digit arithmetic) are compared against the closed forms as an independent check.
OdeResidualReport ode_residuals(const OdeWitness& witness, std::span<const double> t_grid);
OdeResidualReport gz_residuals(std::span<const double> t_grid);
OdeResidualReport gzjm_residuals(std::span<const double> t_grid, int delta);

/// 1 - e^{-(t0+B0)} = sup over [t0, t0+B0] of e^{-u}.
double a_factor(double t0, double B0);
/// 1 + 1/delta = sup over t >= t0 of e^{-u_delta}.
double a_factor_jm(int delta);

/// Max of 1 - e^{-t} over `samples` equispaced points of [t0, t0+B0].
double a_factor_sampled(double t0, double B0, std::size_t samples);
/// Max of 1 + 1/delta - e^{-t} over `samples` equispaced points of [t0, t0 + 60].
double a_factor_jm_sampled(int delta, double t0, std::size_t samples);

/// p/(p-1) - 4p/(2p-1) + 1 == 1/((p-1)(2p-1)), checked in exact arithmetic.
bool chain_identity_holds(const Rational& p);

struct ChainStep {
  double B0 = 0;
  long long k0 = 0;
  double exact_sum = 0;    // closed form of the geometric series from k0
  double direct_sum = 0;   // term-by-term summation of the same series
  double lower_bound = 0;  // bound obtained from the choice of k0
};

struct ChainAuditReport {
  int m = 0;
  double c1 = 0;
  double c2 = 0;
  Rational p;
  double limit = 0;  // ((1-1/p)^{-1} - 2(1-1/(2p))^{-1} + 1)(C2/C1)^p C1
  std::vector<ChainStep> steps;
  bool identity_exact = false;
  bool sums_bounded = false;   // lower_bound <= exact_sum <= C1 for every B0
  bool closed_form_matches = false;  // exact_sum agrees with direct_sum
  bool monotone = false;       // lower bounds increase as B0 decreases
  double final_gap = 0;        // |lower_bound(B0_min) - limit|
  double extrapolated_limit = 0;  // Richardson extrapolation over a halving B0 sequence
  double extrapolated_gap = 0;
  bool limit_below_c1 = false;
  bool theta_bound = false;    // theta(p) <= C1/C2
};

/// Audits the chain on F = z^m, phi = m log|z|^2 (C1 = pi, C2 = pi/(m+1), p = 1 + 1/m).
/// `b0_list` is processed in the given order; extrapolation requires successive halving.
ChainAuditReport chain_audit(int m, std::span<const double> b0_list);

}  // namespace effopen::weights
