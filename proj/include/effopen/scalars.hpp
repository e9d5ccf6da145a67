#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace effopen::scalars {

/// Comparison tolerance used by the scalar checks.
inline constexpr double kTolerance = 1e-10;

/// Constant of the refined lower bound e^{Q} > 0.2876.
inline constexpr double kRefinedQBound = 0.2876;

/// 1 / (sqrt(3) e^{2/e}), the crude lower bound on min e^{Q}.
double crude_q_bound();

/// theta(t) = ((t-1)(2t-1))^{-1/t} for t > 1. Throws DomainError otherwise.
double theta_eval(double t);

/// theta(1 + u), evaluated from the excess u = t - 1 > 0 without cancellation.
double theta_eval_excess(double u);

/// Unique p in (1, 3/2] with theta(p) = ratio, for ratio >= 1.
/// theta is decreasing on (1, 3/2], so every p in (1, p*) satisfies theta(p) > ratio.
double theta_invert(double ratio);

/// Same root as theta_invert, returned as the excess p* - 1 to full relative precision.
double theta_invert_excess(double ratio);

struct ThetaBoundReport {
  struct Inequality {
    std::string name;
    double min_slack = 0;           // min over the grid of (rhs - lhs)
    double min_relative_slack = 0;  // min over the grid of (rhs - lhs) / rhs
    double worst_t = 0;
    std::size_t violations = 0;
  };
  std::vector<Inequality> inequalities;
  bool all_hold() const;
};

/// Checks, at every grid point t > 1,
///   1/(200(t-1)) < 1/(6(t-1)) < t/(6(t-1)) < theta(t),
///   t/((t-1) sqrt(3) e^{2/e}) < theta(t),
///   0.2876 t/(t-1) < theta(t),  1/(400(t-1)) < 0.2876 t/(t-1).
ThetaBoundReport theta_bound_check(std::span<const double> t_grid);

/// As above with a caller-supplied theta; used to show the check catches a wrong theta.
ThetaBoundReport theta_bound_check(std::span<const double> t_grid, const std::function<double(double)>& theta);

/// Q(x) = 2x log x + (1-x) log(1-x) - x log(2-x) on (0,1), with Q(x) = P(1/x).
struct QPoint {
  double x = 0;
  double q = 0;
  double q1 = 0;
  double q2 = 0;
};

QPoint q_eval(double x);

/// P(t) = (1/t) log(1/((t-1)(2t-1))) + log((t-1)/t), so that theta(t) = e^{P(t)} t/(t-1).
double p_eval(double t);

struct QMinimum {
  double x_min = 0;
  double q_min = 0;
  double exp_q_min = 0;
  double q1_at_min = 0;
  double exp_q_half = 0;  // e^{Q(1/2)}, an upper bound for the minimum
  bool above_refined_bound = false;
  bool above_crude_bound = false;
};

/// Minimizes Q on (0,1) by bisection on Q' (Q'' > 0). The root lies in (0, 1/2)
/// because Q' -> -inf at 0+ and Q'(1/2) > 0. `tolerance` is the bracket width.
QMinimum q_analysis(double tolerance);

struct BerndtssonComparison {
  double epsilon0 = 0;  // c2 / 100
  double p_berndtsson = 0;
  double p_theta = 0;
  bool theta_dominates = false;
};

/// Compares 1/(p-1) >= c1 * 2/epsilon0 (epsilon0 = c2/100) with theta(p) > c1/c2.
BerndtssonComparison berndtsson_compare(double c1, double c2);

}  // namespace effopen::scalars
