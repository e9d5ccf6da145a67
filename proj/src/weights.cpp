#include "effopen/weights.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

#include "effopen/errors.hpp"
#include "effopen/kernel.hpp"
#include "effopen/scalars.hpp"
#include "effopen/toric.hpp"

namespace effopen::weights {

double b_eval(double t, double t0, double B0) {
  if (!(t0 > 0)) throw DomainError("b_eval requires t0 > 0");
  if (!(B0 > 0 && B0 <= 1)) throw DomainError("b_eval requires B0 in (0,1]");
  if (t <= -t0 - B0) return 0.0;
  if (t >= -t0) return 1.0;
  return (t + t0 + B0) / B0;
}

void WeightFamilyParams::validate() const {
  if (!(t0 > 0)) throw DomainError("weight family requires t0 > 0");
  if (!(B0 > 0 && B0 <= 1)) throw DomainError("weight family requires B0 in (0,1]");
  if (!(epsilon > 0 && epsilon < B0 / 8)) throw DomainError("weight family requires epsilon in (0, B0/8)");
}

namespace {

constexpr std::size_t kBumpCells = 2048;

double raw_bump(double x) {
  if (!(x > -1 && x < 1)) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

}  // namespace

BumpMoments::BumpMoments() {
  using boost::math::quadrature::gauss_kronrod;
  normalizer_ = gauss_kronrod<double, 31>::integrate(raw_bump, -1.0, 1.0, 15, 1e-15);
  step_ = 2.0 / kBumpCells;
  nodes_.resize(kBumpCells + 1);
  for (auto& t : table_) t.assign(kBumpCells + 1, 0.0);
  for (std::size_t i = 0; i <= kBumpCells; ++i) nodes_[i] = -1.0 + step_ * static_cast<double>(i);
  for (int k = 0; k < 3; ++k) {
    auto f = [k](double x) { return std::pow(x, k) * raw_bump(x); };
    double acc = 0;
    for (std::size_t i = 0; i < kBumpCells; ++i) {
      acc += gauss_kronrod<double, 15>::integrate(f, nodes_[i], nodes_[i + 1], 5, 1e-15);
      table_[k][i + 1] = acc / normalizer_;
    }
    total_[k] = table_[k][kBumpCells];
  }
}

const BumpMoments& BumpMoments::instance() {
  static const BumpMoments moments;
  return moments;
}

double BumpMoments::density(double x) const { return raw_bump(x) / normalizer_; }

double BumpMoments::cumulative(int k, double x) const {
  if (x <= -1) return 0.0;
  if (x >= 1) return total_[k];
  // Cubic Hermite interpolation with exact end derivatives x^k rho(x).
  std::size_t i = std::min(kBumpCells - 1, static_cast<std::size_t>((x + 1.0) / step_));
  const double x0 = nodes_[i];
  const double s = (x - x0) / step_;
  const double y0 = table_[k][i];
  const double y1 = table_[k][i + 1];
  const double d0 = std::pow(x0, k) * density(x0) * step_;
  const double d1 = std::pow(nodes_[i + 1], k) * density(nodes_[i + 1]) * step_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1;
}

namespace {

// Integrals of the mollifier with half-width h: Phi = CDF, G = \int Phi, H = \int G.
struct MollifierIntegrals {
  double h;
  const BumpMoments& bump = BumpMoments::instance();

  double phi(double x) const { return bump.cumulative(0, x / h); }

  double g(double x) const {
    const double xi = x / h;
    if (xi <= -1) return 0.0;
    if (xi >= 1) return x;
    return h * (xi * bump.cumulative(0, xi) - bump.cumulative(1, xi));
  }

  double big_h(double x) const {
    const double xi = x / h;
    if (xi <= -1) return 0.0;
    if (xi >= 1) return h * h * (xi * xi + bump.second_moment()) / 2.0;
    const double m0 = bump.cumulative(0, xi);
    const double gx = xi * m0 - bump.cumulative(1, xi);
    return h * h * (xi * gx - xi * xi * m0 / 2.0 + bump.cumulative(2, xi) / 2.0);
  }
};

}  // namespace

WeightValue weight_family_eval(double t, const WeightFamilyParams& params) {
  params.validate();
  const double eps = params.epsilon;
  const double lower = -params.t0 - params.B0 + 2 * eps;
  const double upper = -params.t0 - 2 * eps;
  const double width = params.B0 - 4 * eps;  // upper - lower
  const double h = eps / 4;
  const double plateau = 0.5 * (lower + upper);

  if (t >= upper + h) return {t, 1.0, 0.0};
  if (t <= lower - h) return {plateau, 0.0, 0.0};

  MollifierIntegrals m{h};
  WeightValue out;
  out.v2 = (m.phi(t - lower) - m.phi(t - upper)) / width;
  out.v1 = (m.g(t - lower) - m.g(t - upper)) / width;
  out.v = (m.big_h(t - lower) - m.big_h(t - upper)) / width + plateau;
  return out;
}

double weight_family_sup_v2(const WeightFamilyParams& params) {
  params.validate();
  return 1.0 / (params.B0 - 4 * params.epsilon);
}

OdeWitness::OdeWitness(std::optional<int> delta) : delta_(delta) {
  if (delta_) {
    if (*delta_ < 1) throw DomainError("ODE witness requires delta >= 1");
    c_ = 1.0 / *delta_;
    A_ = 1.0 + c_;
  }
}

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

template <class T>
struct WitnessJets {
  OdeWitness::Jet u;
  OdeWitness::Jet s;
  T u_value, u1, s_value, s1;  // kept in T for differencing
};

// u = -log D, s = N/D - 1 with D = A - e^{-t} = c + (1 - e^{-t}), N = A t + A c, A = 1 + c.
template <class T>
WitnessJets<T> witness_jets(T t, T c) {
  using std::exp;
  using std::log;
  using boost::math::log1p;
  using boost::math::expm1;
  const T A = 1 + c;
  const T e = exp(-t);
  const T d = c - expm1(-t);
  // log D without cancellation at either end
  const T log_d = e < T(0.5) ? T(log1p(c - e)) : T(log(d));
  const T num = A * t + A * c;

  WitnessJets<T> out;
  out.u_value = -log_d;
  out.u1 = -e / d;
  const T u2 = e * A / (d * d);
  out.s_value = num / d - 1;
  out.s1 = A / d - num * e / (d * d);
  const T s2 = (num * e - 2 * A * e) / (d * d) + 2 * num * e * e / (d * d * d);
  out.u = {static_cast<double>(out.u_value), static_cast<double>(out.u1), static_cast<double>(u2)};
  out.s = {static_cast<double>(out.s_value), static_cast<double>(out.s1), static_cast<double>(s2)};
  return out;
}

}  // namespace

OdeWitness::Jet OdeWitness::u(double t) const {
  if (!(t > 0)) throw DomainError("ODE witness requires t > 0");
  return witness_jets<double>(t, c_).u;
}

OdeWitness::Jet OdeWitness::s(double t) const {
  if (!(t > 0)) throw DomainError("ODE witness requires t > 0");
  return witness_jets<double>(t, c_).s;
}

OdeWitness gz_witness() { return OdeWitness(std::nullopt); }
OdeWitness gzjm_witness(int delta) { return OdeWitness(delta); }

bool OdeResidualReport::ok(double tolerance) const {
  return max_residual_first < tolerance && max_residual_second < tolerance && min_margin > 0 &&
         min_s_minus_floor >= -tolerance && max_u1 <= 0;
}

OdeResidualReport ode_residuals(const OdeWitness& witness, std::span<const double> t_grid) {
  OdeResidualReport r;
  r.min_margin = std::numeric_limits<double>::infinity();
  r.min_s_minus_floor = std::numeric_limits<double>::infinity();
  r.max_u1 = -std::numeric_limits<double>::infinity();
  constexpr double h = 1e-5;
  auto rel = [](double approx, double exact) {
    return std::abs(approx - exact) / std::max(std::abs(exact), 1e-300);
  };
  for (double t : t_grid) {
    if (!(t > 0)) throw DomainError("ODE residuals require t > 0");
    const auto u = witness.u(t);
    const auto s = witness.s(t);
    const double margin = u.d2 * s.value - s.d2;
    const double first = s.d1 - s.value * u.d1 - 1.0;
    const double second = (s.value + s.d1 * s.d1 / margin) * std::exp(u.value - t) - 1.0;
    r.max_residual_first = std::max(r.max_residual_first, std::abs(first));
    r.max_residual_second = std::max(r.max_residual_second, std::abs(second));
    r.min_margin = std::min(r.min_margin, margin);
    r.min_s_minus_floor = std::min(r.min_s_minus_floor, s.value - witness.s_floor());
    r.max_u1 = std::max(r.max_u1, u.d1);

    if (t > 2 * h) {
      // Differences are taken in 50-digit arithmetic so that rounding does not swamp the
      // exponentially small derivatives near the end of the grid.
      const Big c = witness.delta() ? Big(1) / *witness.delta() : Big(0);
      const Big tb(t), hb(h);
      const auto p = witness_jets<Big>(tb + hb, c);
      const auto m = witness_jets<Big>(tb - hb, c);
      const double fd[4] = {static_cast<double>((p.u_value - m.u_value) / (2 * hb)),
                            static_cast<double>((p.u1 - m.u1) / (2 * hb)),
                            static_cast<double>((p.s_value - m.s_value) / (2 * hb)),
                            static_cast<double>((p.s1 - m.s1) / (2 * hb))};
      const double exact[4] = {u.d1, u.d2, s.d1, s.d2};
      for (int i = 0; i < 4; ++i) r.max_fd_relative_error = std::max(r.max_fd_relative_error, rel(fd[i], exact[i]));
    }
  }
  return r;
}

OdeResidualReport gz_residuals(std::span<const double> t_grid) { return ode_residuals(gz_witness(), t_grid); }

OdeResidualReport gzjm_residuals(std::span<const double> t_grid, int delta) {
  return ode_residuals(gzjm_witness(delta), t_grid);
}

double a_factor(double t0, double B0) {
  if (!(t0 > 0)) throw DomainError("a_factor requires t0 > 0");
  if (!(B0 > 0 && B0 <= 1)) throw DomainError("a_factor requires B0 in (0,1]");
  return -std::expm1(-(t0 + B0));
}

double a_factor_jm(int delta) {
  if (delta < 1) throw DomainError("a_factor_jm requires delta >= 1");
  return 1.0 + 1.0 / delta;
}

double a_factor_sampled(double t0, double B0, std::size_t samples) {
  if (samples < 2) throw DomainError("a_factor_sampled requires at least two samples");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t0 + B0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    best = std::max(best, std::exp(-gz_witness().u(t).value));
  }
  return best;
}

double a_factor_jm_sampled(int delta, double t0, std::size_t samples) {
  if (samples < 2) throw DomainError("a_factor_jm_sampled requires at least two samples");
  const OdeWitness w = gzjm_witness(delta);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = std::max(t0, 1e-9) + 60.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    best = std::max(best, std::exp(-w.u(t).value));
  }
  return best;
}

bool chain_identity_holds(const Rational& p) {
  if (p == 1 || 2 * p == 1) return false;
  const Rational lhs = p / (p - 1) - 4 * p / (2 * p - 1) + 1;
  const Rational rhs = 1 / ((p - 1) * (2 * p - 1));
  return lhs == rhs;
}

namespace {

// B0 / (1 - e^{-c B0}) without cancellation.
double geometric_factor(double B0, double c) { return -B0 / std::expm1(-c * B0); }

}  // namespace

ChainAuditReport chain_audit(int m, std::span<const double> b0_list) {
  if (m < 1) throw DomainError("chain_audit requires m >= 1");
  using toric::MonomialWeight;
  using toric::PolyFunction;

  ChainAuditReport out;
  out.m = m;
  const PolyFunction f = PolyFunction::monomial(toric::ExponentVector{m});
  const MonomialWeight a{Rational(m)};
  out.p = 1 + Rational(1, m);
  const toric::PiScaled c1 = toric::weighted_norm_sq(f, a, Rational(1));
  const toric::PiScaled c2 = kernel::c_fp(f, a, out.p);
  out.c1 = c1.value();
  out.c2 = c2.value();
  const double p = to_double(out.p);
  const double x = to_double(c2.coefficient() / c1.coefficient());  // C2/C1
  const double C1 = out.c1;
  const double C2 = out.c2;

  out.identity_exact = chain_identity_holds(out.p);
  out.limit = (p / (p - 1) - 4 * p / (2 * p - 1) + 1) * std::pow(x, p) * C1;
  out.limit_below_c1 = out.limit <= C1;
  out.theta_bound = scalars::theta_eval(p) <= C1 / C2;

  out.sums_bounded = true;
  out.closed_form_matches = true;
  for (double B0 : b0_list) {
    if (!(B0 > 0 && B0 <= 1)) throw DomainError("chain_audit requires B0 in (0,1]");
    ChainStep step;
    step.B0 = B0;
    // least k0 with e^{k0 B0/p} >= C1/C2
    step.k0 = static_cast<long long>(std::ceil(p * std::log(1.0 / x) / B0 - 1e-12));
    const double k0 = static_cast<double>(step.k0);
    const double c_a = 1 - 1 / p;
    const double c_b = 1 - 1 / (2 * p);

    step.exact_sum = std::exp(-B0) * (C2 * geometric_factor(B0, c_a) * std::exp(-k0 * c_a * B0) -
                                      2 * std::sqrt(C1 * C2) * geometric_factor(B0, c_b) * std::exp(-k0 * c_b * B0) +
                                      C1 * geometric_factor(B0, 1.0) * std::exp(-k0 * B0));

    double direct = 0;
    for (long long k = step.k0;; ++k) {
      const double kb = static_cast<double>(k) * B0;
      const double root = std::sqrt(C2) - std::sqrt(C1 * std::exp(-kb / p));
      const double term = B0 * std::exp(-kb - B0) * std::exp(kb / p) * root * root;
      direct += term;
      if (term < 1e-18 * std::max(direct, 1e-300) && k > step.k0 + 10) break;
    }
    step.direct_sum = direct;

    step.lower_bound = geometric_factor(B0, c_a) * std::pow(x, p - 1) * std::exp(-B0 - c_a * B0) * C2 -
                       2 * geometric_factor(B0, c_b) * std::pow(x, p - 0.5) * std::exp(-B0) * std::sqrt(C1 * C2) +
                       geometric_factor(B0, 1.0) * std::pow(x, p) * std::exp(-2 * B0) * C1;

    out.sums_bounded = out.sums_bounded && step.lower_bound <= step.exact_sum * (1 + 1e-12) && step.exact_sum <= C1;
    out.closed_form_matches =
        out.closed_form_matches && std::abs(step.exact_sum - step.direct_sum) <= 1e-10 * std::max(1.0, step.exact_sum);
    out.steps.push_back(step);
  }

  std::vector<ChainStep> by_b0(out.steps);
  std::sort(by_b0.begin(), by_b0.end(), [](const ChainStep& l, const ChainStep& r) { return l.B0 > r.B0; });
  out.monotone = true;
  for (std::size_t i = 1; i < by_b0.size(); ++i) {
    out.monotone = out.monotone && by_b0[i].lower_bound > by_b0[i - 1].lower_bound &&
                   by_b0[i].lower_bound <= out.limit;
  }
  if (!by_b0.empty()) {
    out.final_gap = std::abs(by_b0.back().lower_bound - out.limit);
    out.extrapolated_limit = by_b0.back().lower_bound;
    out.extrapolated_gap = out.final_gap;
  }

  // The lower bound is analytic in B0, so Richardson elimination of the B0^j error terms
  // over a halving sequence estimates its B0 -> 0 limit.
  bool halving = by_b0.size() >= 2;
  for (std::size_t i = 1; i < by_b0.size(); ++i) {
    halving = halving && std::abs(by_b0[i].B0 * 2 - by_b0[i - 1].B0) <= 1e-15 * by_b0[i - 1].B0;
  }
  if (halving) {
    std::vector<double> table;
    for (const auto& s : by_b0) table.push_back(s.lower_bound);
    double factor = 2.0;
    while (table.size() > 1) {
      for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
      }
      table.pop_back();
      factor *= 2.0;
    }
    out.extrapolated_limit = table.front();
    out.extrapolated_gap = std::abs(out.extrapolated_limit - out.limit);
  }
  return out;
}

}  // namespace effopen::weights
