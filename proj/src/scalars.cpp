#include "effopen/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "effopen/errors.hpp"

namespace effopen::scalars {

double crude_q_bound() { return 1.0 / (std::sqrt(3.0) * std::exp(2.0 / std::exp(1.0))); }

double theta_eval_excess(double u) {
  if (!(u > 0)) throw DomainError("theta(t) requires t > 1");
  const double t = 1.0 + u;
  // (t-1)(2t-1) = u (1 + 2u)
  return std::exp(-(std::log(u) + std::log1p(2.0 * u)) / t);
}

double theta_eval(double t) {
  if (!(t > 1.0)) throw DomainError("theta(t) requires t > 1");
  return theta_eval_excess(t - 1.0);
}

double theta_invert_excess(double ratio) {
  if (std::isnan(ratio) || ratio < 1.0) {
    throw InconsistentInput("theta_invert requires ratio >= 1 (C1 >= C2)");
  }
  if (ratio == 1.0) return 0.5;
  if (std::isinf(ratio)) return 0.0;

  double hi = 0.5;  // theta(1 + hi) = 1 <= ratio
  double lo = 0.25;
  while (theta_eval_excess(lo) <= ratio) {
    hi = lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) return 0.0;
  }
  // theta(1+lo) > ratio >= theta(1+hi); geometric bisection keeps relative precision near 0.
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    if (theta_eval_excess(mid) > ratio) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  // Pick whichever endpoint reproduces the ratio more closely.
  const double err_lo = std::abs(theta_eval_excess(lo) - ratio);
  const double err_hi = std::abs(theta_eval_excess(hi) - ratio);
  return err_lo < err_hi ? lo : hi;
}

double theta_invert(double ratio) { return 1.0 + theta_invert_excess(ratio); }

bool ThetaBoundReport::all_hold() const {
  return std::all_of(inequalities.begin(), inequalities.end(),
                     [](const Inequality& q) { return q.violations == 0 && q.min_slack > 0; });
}

ThetaBoundReport theta_bound_check(std::span<const double> t_grid, const std::function<double(double)>& theta) {
  const double crude = crude_q_bound();
  struct Pair {
    const char* name;
    double (*lhs)(double, double, double);
    double (*rhs)(double, double, double);
  };
  // (t, theta(t), crude) -> value
  static const Pair pairs[] = {
      {"1/(200(t-1)) < 1/(6(t-1))", [](double t, double, double) { return 1.0 / (200.0 * (t - 1.0)); },
       [](double t, double, double) { return 1.0 / (6.0 * (t - 1.0)); }},
      {"1/(6(t-1)) < t/(6(t-1))", [](double t, double, double) { return 1.0 / (6.0 * (t - 1.0)); },
       [](double t, double, double) { return t / (6.0 * (t - 1.0)); }},
      {"t/(6(t-1)) < theta(t)", [](double t, double, double) { return t / (6.0 * (t - 1.0)); },
       [](double, double th, double) { return th; }},
      {"t/((t-1) sqrt(3) e^{2/e}) < theta(t)", [](double t, double, double c) { return c * t / (t - 1.0); },
       [](double, double th, double) { return th; }},
      {"0.2876 t/(t-1) < theta(t)", [](double t, double, double) { return kRefinedQBound * t / (t - 1.0); },
       [](double, double th, double) { return th; }},
      {"1/(400(t-1)) < 0.2876 t/(t-1)", [](double t, double, double) { return 1.0 / (400.0 * (t - 1.0)); },
       [](double t, double, double) { return kRefinedQBound * t / (t - 1.0); }},
  };

  ThetaBoundReport report;
  for (const auto& p : pairs) {
    ThetaBoundReport::Inequality q;
    q.name = p.name;
    q.min_slack = std::numeric_limits<double>::infinity();
    q.min_relative_slack = std::numeric_limits<double>::infinity();
    report.inequalities.push_back(q);
  }
  for (double t : t_grid) {
    if (!(t > 1.0)) throw DomainError("theta_bound_check: grid point must exceed 1");
    const double th = theta(t);
    for (std::size_t i = 0; i < std::size(pairs); ++i) {
      const double lhs = pairs[i].lhs(t, th, crude);
      const double rhs = pairs[i].rhs(t, th, crude);
      const double slack = rhs - lhs;
      auto& q = report.inequalities[i];
      if (!(slack > 0)) ++q.violations;
      if (slack < q.min_slack) {
        q.min_slack = slack;
        q.worst_t = t;
      }
      q.min_relative_slack = std::min(q.min_relative_slack, slack / rhs);
    }
  }
  return report;
}

ThetaBoundReport theta_bound_check(std::span<const double> t_grid) {
  return theta_bound_check(t_grid, [](double t) { return theta_eval(t); });
}

QPoint q_eval(double x) {
  if (!(x > 0 && x < 1)) throw DomainError("Q(x) requires x in (0,1)");
  QPoint p;
  p.x = x;
  const double log1mx = std::log1p(-x);
  p.q = 2.0 * x * std::log(x) + (1.0 - x) * log1mx - x * std::log(2.0 - x);
  p.q1 = 2.0 * std::log(x) - log1mx + 2.0 / (2.0 - x) - std::log(2.0 - x);
  p.q2 = 2.0 / x + 1.0 / (1.0 - x) + 2.0 / ((2.0 - x) * (2.0 - x)) + 1.0 / (2.0 - x);
  return p;
}

double p_eval(double t) {
  if (!(t > 1.0)) throw DomainError("P(t) requires t > 1");
  const double u = t - 1.0;
  return -(std::log(u) + std::log1p(2.0 * u)) / t + std::log(u / t);
}

QMinimum q_analysis(double tolerance) {
  if (!(tolerance > 0)) throw DomainError("q_analysis requires tolerance > 0");
  double lo = 1e-12;
  double hi = 0.5;
  if (!(q_eval(lo).q1 < 0 && q_eval(hi).q1 > 0)) {
    throw PreconditionError("Q' bracket", "Q' does not change sign on (1e-12, 1/2)");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double d = q_eval(mid).q1;
    if (d == 0) {
      lo = hi = mid;
      break;
    }
    (d < 0 ? lo : hi) = mid;
  }
  QMinimum out;
  out.x_min = 0.5 * (lo + hi);
  const QPoint at = q_eval(out.x_min);
  out.q_min = at.q;
  out.exp_q_min = std::exp(at.q);
  out.q1_at_min = at.q1;
  out.exp_q_half = std::exp(q_eval(0.5).q);
  out.above_refined_bound = out.exp_q_min > kRefinedQBound;
  out.above_crude_bound = out.exp_q_min > crude_q_bound();
  return out;
}

BerndtssonComparison berndtsson_compare(double c1, double c2) {
  if (!(c1 > 0 && c2 > 0)) throw DomainError("berndtsson_compare requires positive constants");
  if (c2 > c1) throw InconsistentInput("berndtsson_compare requires c1 >= c2");
  BerndtssonComparison out;
  out.epsilon0 = c2 / 100.0;
  // 1/(p-1) >= c1 * 2/epsilon0  <=>  p <= 1 + epsilon0/(2 c1)
  out.p_berndtsson = 1.0 + out.epsilon0 / (2.0 * c1);
  out.p_theta = theta_invert(c1 / c2);
  out.theta_dominates = out.p_theta > out.p_berndtsson;
  return out;
}

}  // namespace effopen::scalars
