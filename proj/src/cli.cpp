#include "effopen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "effopen/asymptotics.hpp"
#include "effopen/errors.hpp"
#include "effopen/kernel.hpp"
#include "effopen/rational.hpp"
#include "effopen/scalars.hpp"
#include "effopen/toric.hpp"
#include "effopen/verify.hpp"
#include "effopen/weights.hpp"

namespace effopen::cli {

namespace {

using toric::ExtendedRational;
using toric::MonomialWeight;
using toric::PiScaled;
using toric::PolyFunction;

// ---- value encoding ----

json float_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json exact(const PiScaled& v) {
  if (v.is_infinite()) return {{"kind", "exact"}, {"infinite", true}};
  return {{"kind", "exact"}, {"coeff", format_rational(v.coefficient())}, {"pi_power", v.pi_power()}};
}

json exact(const Rational& r) { return exact(PiScaled(r, 0)); }

json exact(const ExtendedRational& e) { return e.infinite ? exact(PiScaled::infinity()) : exact(e.value); }

json approx(double v, double tolerance) {
  return {{"kind", "approx"}, {"value", float_value(v)}, {"tolerance", float_value(tolerance)}};
}

// tolerance relative to max(1, |v|)
json approx_rel(double v, double rel) { return approx(v, std::isfinite(v) ? rel * std::max(1.0, std::abs(v)) : 0.0); }

struct Checks {
  json list = json::array();
  bool all = true;

  void add(const std::string& name, bool ok) {
    list.push_back({{"name", name}, {"pass", ok}});
    all = all && ok;
  }
};

struct Report {
  json results = json::object();
  Checks checks;
  json notes = json::array();
  json discrepancies = json::array();
};

// ---- spec parsing ----

bool contains(const std::vector<std::string>& list, const std::string& v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

Rational parse_field_rational(const json& j, const std::string& field) {
  if (!j.is_string()) throw SpecError(field, "expected a rational string such as \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SpecError(field, e.what());
  }
}

template <typename T>
T get_integer(const json& j, const std::string& field, long long lo) {
  if (!j.is_number_integer()) throw SpecError(field, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo) throw SpecError(field, "must be at least " + std::to_string(lo));
  return static_cast<T>(v);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw SpecError(field, "expected a number");
  return j.get<double>();
}

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& prefix) {
  for (const auto& [key, _] : j.items()) {
    if (!contains(known, key)) throw SpecError(prefix + key, "unknown field");
  }
}

bool needs_weight(const ProblemSpec& s) {
  const bool family = s.m && (s.task == "kernel" || s.task == "effective-p");
  return !family && (s.task == "kernel" || s.task == "effective-p" || s.task == "dk" || s.task == "jm");
}

void validate(const ProblemSpec& s) {
  if (!contains(kTasks, s.task)) throw SpecError("task", "unknown task '" + s.task + "'");
  for (std::size_t i = 0; i < s.weight.size(); ++i) {
    const std::string field = "weight[" + std::to_string(i) + "]";
    Rational a;
    try {
      a = parse_rational(s.weight[i]);
    } catch (const std::invalid_argument& e) {
      throw SpecError(field, e.what());
    }
    if (a < 0) throw SpecError(field, "weight coefficients must be nonnegative");
  }
  std::optional<std::size_t> dim;
  if (!s.weight.empty()) dim = s.weight.size();
  for (std::size_t i = 0; i < s.f.size(); ++i) {
    const std::string field = "f[" + std::to_string(i) + "]";
    const auto& term = s.f[i];
    if (term.alpha.empty()) throw SpecError(field + ".alpha", "must be nonempty");
    for (int e : term.alpha) {
      if (e < 0) throw SpecError(field + ".alpha", "exponents must be nonnegative");
    }
    if (dim && term.alpha.size() != *dim) {
      throw SpecError(field + ".alpha", "has " + std::to_string(term.alpha.size()) + " entries, expected " +
                                            std::to_string(*dim));
    }
    dim = term.alpha.size();
    for (const auto& [name, text] : {std::pair{"re", term.re}, std::pair{"im", term.im}}) {
      try {
        parse_rational(text);
      } catch (const std::invalid_argument& e) {
        throw SpecError(field + "." + name, e.what());
      }
    }
  }
  if (needs_weight(s) && s.weight.empty()) throw SpecError("weight", "required for task " + s.task);
  if (s.t) {
    Rational t;
    try {
      t = parse_rational(*s.t);
    } catch (const std::invalid_argument& e) {
      throw SpecError("params.t", e.what());
    }
    if (t <= 1) throw SpecError("params.t", "must exceed 1");
  } else if (s.task == "theta") {
    throw SpecError("params.t", "required for task theta");
  }
  if (s.m && *s.m < 1) throw SpecError("params.m", "must be at least 1");
  for (std::size_t i = 0; i < s.R_grid.size(); ++i) {
    if (!(s.R_grid[i] >= 0) || !std::isfinite(s.R_grid[i])) {
      throw SpecError("params.R_grid[" + std::to_string(i) + "]", "must be finite and >= 0");
    }
  }
  if (s.B0 && !(*s.B0 > 0 && *s.B0 <= 1)) throw SpecError("params.B0", "must lie in (0, 1]");
  for (std::size_t i = 0; i < s.deltas.size(); ++i) {
    if (s.deltas[i] < 1) throw SpecError("params.deltas[" + std::to_string(i) + "]", "must be at least 1");
  }
  if (s.mc && (s.mc->samples < 1 || s.mc->partitions < 1)) throw SpecError("params.mc", "samples and partitions must be positive");
  if (s.suite && *s.suite != "fast" && *s.suite != "full") throw SpecError("params.suite", "must be fast or full");
}

// ---- problem construction ----

MonomialWeight weight_of(const ProblemSpec& s) {
  if (s.m && (s.task == "kernel" || s.task == "effective-p")) return MonomialWeight{Rational(*s.m)};
  std::vector<Rational> a;
  for (const auto& w : s.weight) a.push_back(parse_rational(w));
  return MonomialWeight(std::move(a));
}

PolyFunction function_of(const ProblemSpec& s, std::size_t n) {
  if (s.m && (s.task == "kernel" || s.task == "effective-p")) {
    return PolyFunction::monomial(toric::ExponentVector{*s.m});
  }
  if (s.f.empty()) return PolyFunction::constant(n);
  PolyFunction f(n);
  for (const auto& term : s.f) {
    f.add_term(toric::ExponentVector(term.alpha), {parse_rational(term.re), parse_rational(term.im)});
  }
  if (f.is_zero()) throw SpecError("f", "all coefficients cancel; F must be nonzero");
  return f;
}

// z1 + z2^2 with phi = log|z1|^2; its published kernel value needs an annotation
bool is_third_example(const PolyFunction& f, const MonomialWeight& a) {
  PolyFunction g(2);
  g.add_term({1, 0}, {Rational(1), Rational(0)});
  g.add_term({0, 2}, {Rational(1), Rational(0)});
  return f == g && a == MonomialWeight{Rational(1), Rational(0)};
}

bool is_unit_case(const PolyFunction& f, const MonomialWeight& a) {
  return f == PolyFunction::constant(1) && a == MonomialWeight{Rational(1)};
}

// ---- tasks ----

void task_theta(const ProblemSpec& s, Report& r) {
  const Rational t = parse_rational(*s.t);
  r.results["t"] = exact(t);
  if ((t - 1) * (2 * t - 1) == 1) {
    r.results["theta"] = exact(Rational(1));
  } else {
    r.results["theta"] = approx_rel(scalars::theta_eval_excess(to_double(t - 1)), 1e-14);
  }
}

void task_kernel(const ProblemSpec& s, Report& r) {
  const MonomialWeight a = weight_of(s);
  const PolyFunction f = function_of(s, a.dimension());
  const auto k = kernel::kernel_inv(f, a);
  const PiScaled norm = toric::weighted_norm_sq(f, a, Rational(1));
  r.results["k_inv"] = exact(k.k_inv);
  r.results["kernel"] = exact(k.kernel());
  r.results["jumping"] = exact(k.jumping);
  r.results["norm_sq"] = exact(norm);
  r.results["ideal"] = toric::to_string(k.ideal);
  json support = json::array();
  for (const auto& alpha : k.projected_support) support.push_back(alpha.values());
  r.results["projected_support"] = support;
  if (is_third_example(f, a)) {
    r.discrepancies.push_back("kernel printed as 4/pi^2 in the reference; the oracle gives " +
                              toric::to_string(k.kernel()) + " since \\int |z2|^4 over the bidisc is pi^2/3");
  }
  if (s.mc) {
    const mc::McConfig cfg{s.mc->seed, s.mc->samples, s.mc->partitions};
    const auto est = kernel::mc_weighted_norm(f, a, Rational(1), cfg);
    r.results["mc_norm_sq"] = {{"estimate", approx(est.mean, 4 * est.std_error)},
                               {"divergent", est.divergent},
                               {"samples", est.samples}};
    r.checks.add("mc divergence flag matches the exact gate", est.divergent == norm.is_infinite());
    if (!norm.is_infinite()) r.checks.add("mc estimate within 4 standard errors", est.within(norm.value(), 4.0));
  }
}

void task_effective_p(const ProblemSpec& s, Report& r) {
  const MonomialWeight a = weight_of(s);
  const PolyFunction f = function_of(s, a.dimension());
  const auto e = kernel::effective_p_report(f, a);
  r.results["c1"] = exact(e.c1);
  r.results["c2"] = exact(e.c2);
  r.results["ratio"] = exact(e.c1 * e.c2.reciprocal());
  r.results["p_effective"] = approx_rel(e.p_effective, 1e-12);
  r.results["p_excess"] = approx(e.p_excess, 1e-12 * e.p_excess);
  r.results["membership_p"] = approx_rel(e.membership_p, 1e-12);
  r.results["membership_verdict"] = e.membership_verdict;
  r.results["berndtsson_p"] = approx_rel(e.berndtsson_p, 1e-12);
  r.results["theta_dominates"] = e.p_effective > e.berndtsson_p;
  r.checks.add("membership at p_effective (1 - 1e-9)", e.membership_verdict);
  r.checks.add("p_effective exceeds the Berndtsson exponent", e.p_effective > e.berndtsson_p);
}

json series_json(const asymptotics::AsymptoteSeries& series) {
  json points = json::array();
  for (const auto& p : series.points) {
    points.push_back({{"R", approx(p.R, 0)},
                      {"value", approx_rel(p.value, 1e-12)},
                      {"bound", approx_rel(p.bound, 1e-12)},
                      {"slack", approx_rel(p.slack, 1e-12)}});
  }
  double spread = 0;
  if (series.points.size() >= 2) {
    spread = std::abs(series.points.back().value - series.points[series.points.size() - 2].value);
  }
  return {{"points", points},
          {"bound", exact(series.bound)},
          {"liminf", approx_rel(series.liminf_estimate, 1e-12)},
          {"extrapolation", approx(series.extrapolation, std::isfinite(series.extrapolation) ? spread : 0.0)},
          {"compared", series.compared},
          {"bound_holds", series.bound_holds}};
}

void add_notes(const std::vector<std::string>& notes, Report& r) {
  for (const auto& n : notes) {
    if (n.rfind("discrepancy", 0) == 0) {
      r.discrepancies.push_back(n);
    } else {
      r.notes.push_back(n);
    }
  }
}

json asymptote_json(const asymptotics::AsymptoteReport& rep, Report& r) {
  json series = json::object();
  for (const auto& s : rep.series) {
    series[s.name] = series_json(s);
    if (s.compared) r.checks.add(s.name + " liminf >= bound", s.bound_holds);
  }
  add_notes(rep.notes, r);
  return {{"lower_bound", exact(rep.lower_bound)}, {"hypothesis_ok", rep.hypothesis_ok}, {"series", series}};
}

std::vector<double> default_R_grid() {
  std::vector<double> grid;
  for (int R = 0; R <= 30; ++R) grid.push_back(R);
  return grid;
}

void task_dk(const ProblemSpec& s, Report& r) {
  const MonomialWeight a = weight_of(s);
  const PolyFunction f = function_of(s, a.dimension());
  const auto grid = s.R_grid.empty() ? default_R_grid() : s.R_grid;
  const double B0 = s.B0.value_or(1.0);
  const auto rep = asymptotics::dk_asymptote_report(f, a, grid, B0);
  r.results = asymptote_json(rep, r);
  r.results["B0"] = approx(B0, 0);
  if (is_unit_case(f, a)) {
    bool equal = true;
    for (const auto& p : rep.find("sublevel").points) equal = equal && p.value == std::numbers::pi;
    r.checks.add("equality case: e^R mu == pi on the grid", equal);
  }
}

void task_jm(const ProblemSpec& s, Report& r) {
  const MonomialWeight a = weight_of(s);
  const PolyFunction f = function_of(s, a.dimension());
  std::vector<int> deltas = s.deltas.empty() ? std::vector<int>{1, 2, 5, 10, 100, 1000} : s.deltas;
  std::vector<double> grid = s.R_grid;
  if (grid.empty()) {
    for (double radius : {0.5, 0.1, 0.01}) grid.push_back(-2 * std::log(radius));
  }
  const auto rep = asymptotics::jm_asymptote_report(f, a, deltas, grid);
  r.results["asymptote"] = asymptote_json(rep.asymptote, r);
  r.results["jumping"] = exact(rep.jumping);
  json normalized = json::array();
  for (const auto& v : rep.normalized_weight) normalized.push_back(exact(v));
  r.results["normalized_weight"] = normalized;
  json rows = json::array();
  for (const auto& row : rep.deltas) {
    rows.push_back({{"delta", row.delta},
                    {"weight_jumping", exact(row.weight_jumping)},
                    {"k_inv", exact(row.k_inv)},
                    {"sup_factor", exact(row.sup_factor)},
                    {"c_value", exact(row.c_value)},
                    {"rhs", exact(row.rhs)},
                    {"norm_exact", approx_rel(row.norm_exact, 1e-12)},
                    {"norm_quadrature", approx_rel(row.norm_quadrature, 1e-8)},
                    {"diverges_at_threshold", row.diverges_at_threshold}});
    const double gap = std::abs(row.norm_exact - row.norm_quadrature) / std::max(1.0, std::abs(row.norm_exact));
    const std::string tag = " at delta = " + std::to_string(row.delta);
    r.checks.add("cone formula matches quadrature" + tag, gap < 1e-8);
    r.checks.add("norm diverges at the threshold" + tag, row.diverges_at_threshold);
  }
  r.results["deltas"] = rows;
  r.results["rhs_sup"] = exact(rep.rhs_sup);
  r.results["best_delta"] = rep.best_delta;
  if (rep.asymptote.hypothesis_ok) {
    r.checks.add("lhs liminf >= sup rhs", rep.asymptote.find("lhs").liminf_estimate >= rep.rhs_sup.value() - 1e-9);
  }
}

json residual_json(const weights::OdeResidualReport& rep, double tolerance) {
  return {{"max_residual_first", approx(rep.max_residual_first, tolerance)},
          {"max_residual_second", approx(rep.max_residual_second, tolerance)},
          {"min_margin", approx_rel(rep.min_margin, 1e-12)},
          {"min_s_minus_floor", approx_rel(rep.min_s_minus_floor, 1e-12)},
          {"max_u1", approx_rel(rep.max_u1, 1e-12)},
          {"max_fd_relative_error", approx(rep.max_fd_relative_error, 1e-6)},
          {"ok", rep.ok(tolerance)}};
}

void task_ode(const ProblemSpec& s, Report& r) {
  constexpr double kTol = 1e-10;
  std::vector<double> grid(200);
  for (int i = 0; i < 200; ++i) grid[i] = 0.1 + (50.0 - 0.1) * i / 199.0;
  const auto gz = weights::gz_residuals(grid);
  r.results["gz"] = residual_json(gz, kTol);
  r.checks.add("GZ residuals", gz.ok(kTol));
  const double B0 = s.B0.value_or(1.0);
  const double factor = weights::a_factor(1.0, B0);
  const double sampled = weights::a_factor_sampled(1.0, B0, 10000);
  r.results["gz"]["t0"] = approx(1.0, 0);
  r.results["gz"]["B0"] = approx(B0, 0);
  r.results["gz"]["factor"] = approx_rel(factor, 1e-15);
  r.results["gz"]["factor_sampled"] = approx(sampled, 1e-12);
  r.checks.add("GZ factor matches the sampled supremum", std::abs(sampled - factor) < 1e-12);
  json rows = json::array();
  for (int delta : s.deltas.empty() ? std::vector<int>{1, 2, 5, 10} : s.deltas) {
    const auto rep = weights::gzjm_residuals(grid, delta);
    json row = residual_json(rep, kTol);
    const double sampled_jm = weights::a_factor_jm_sampled(delta, 0.5, 10000);
    row["delta"] = delta;
    row["s_floor"] = exact(Rational(1, delta));
    row["factor"] = exact(1 + Rational(1, delta));
    row["factor_sampled"] = approx(sampled_jm, 1e-12);
    rows.push_back(row);
    const std::string tag = " at delta = " + std::to_string(delta);
    r.checks.add("GZJM residuals" + tag, rep.ok(kTol));
    r.checks.add("GZJM factor matches the sampled supremum" + tag,
                 std::abs(sampled_jm - weights::a_factor_jm(delta)) < 1e-12);
  }
  r.results["gzjm"] = rows;
}

void task_audit(const ProblemSpec& s, Report& r) {
  const int m = s.m.value_or(3);
  const double b0_min = s.B0.value_or(1.0 / 64);
  std::vector<double> b0;
  for (double b = 1.0; b >= b0_min * (1 - 1e-12); b /= 2) b0.push_back(b);
  const auto rep = weights::chain_audit(m, b0);
  const auto f = PolyFunction::monomial(toric::ExponentVector{m});
  const MonomialWeight a{Rational(m)};
  r.results["m"] = m;
  r.results["p"] = exact(rep.p);
  r.results["c1"] = exact(toric::weighted_norm_sq(f, a, Rational(1)));
  r.results["c2"] = exact(kernel::kernel_inv(f, a).k_inv);
  r.results["limit"] = approx_rel(rep.limit, 1e-12);
  json steps = json::array();
  for (const auto& st : rep.steps) {
    steps.push_back({{"B0", approx(st.B0, 0)},
                     {"k0", st.k0},
                     {"exact_sum", approx_rel(st.exact_sum, 1e-12)},
                     {"direct_sum", approx_rel(st.direct_sum, 1e-10)},
                     {"lower_bound", approx_rel(st.lower_bound, 1e-12)}});
  }
  r.results["steps"] = steps;
  r.results["last_step"] = steps.back();
  r.results["final_gap"] = approx(rep.final_gap, 1e-12);
  r.results["extrapolated_limit"] = approx(rep.extrapolated_limit, 1e-6);
  r.results["extrapolated_gap"] = approx(rep.extrapolated_gap, 1e-6);
  r.checks.add("exact rational identity", rep.identity_exact);
  r.checks.add("lower_bound <= sum <= C1", rep.sums_bounded);
  r.checks.add("closed form matches direct summation", rep.closed_form_matches);
  r.checks.add("lower bounds increase as B0 shrinks", rep.monotone);
  r.checks.add("limit below C1", rep.limit_below_c1);
  r.checks.add("theta(p) <= C1/C2", rep.theta_bound);
  if (rep.steps.size() >= 3) {
    r.checks.add("extrapolated limit within 1e-6", rep.extrapolated_gap < 1e-6);
  } else {
    r.notes.push_back("fewer than three B0 values: no extrapolation check");
  }
}

void task_verify(const ProblemSpec& s, Report& r) {
  verify::Options options;
  options.suite = s.suite.value_or("fast") == "full" ? verify::Suite::kFull : verify::Suite::kFast;
  if (s.mc) options.seed = s.mc->seed;
  json rows = json::array();
  for (const auto& c : verify::run_acceptance(options)) {
    rows.push_back({{"id", c.id}, {"title", c.title}, {"status", verify::to_string(c.status)}, {"detail", c.detail}});
    if (c.status != verify::Status::kSkip) r.checks.add("criterion " + std::to_string(c.id), c.status == verify::Status::kPass);
  }
  r.results["suite"] = s.suite.value_or("fast");
  r.results["seed"] = options.seed;
  r.results["criteria"] = rows;
}

// ---- CSV columns ----

struct Column {
  std::string name;
  std::string pointer;
};

std::vector<Column> columns_for(const std::string& task) {
  if (task == "theta") return {{"t", "/results/t"}, {"theta", "/results/theta"}};
  if (task == "kernel") {
    return {{"k_inv", "/results/k_inv"}, {"kernel", "/results/kernel"}, {"jumping", "/results/jumping"},
            {"norm_sq", "/results/norm_sq"}};
  }
  if (task == "effective-p") {
    return {{"c1", "/results/c1"},
            {"c2", "/results/c2"},
            {"ratio", "/results/ratio"},
            {"p_effective", "/results/p_effective"},
            {"p_excess", "/results/p_excess"},
            {"membership_p", "/results/membership_p"},
            {"membership_verdict", "/results/membership_verdict"},
            {"berndtsson_p", "/results/berndtsson_p"},
            {"theta_dominates", "/results/theta_dominates"}};
  }
  if (task == "dk") {
    const std::string sub = "/results/series/sublevel";
    return {{"R", sub + "/points/0/R"},
            {"value", sub + "/points/0/value"},
            {"bound", sub + "/points/0/bound"},
            {"slack", sub + "/points/0/slack"},
            {"band", "/results/series/band/points/0/value"},
            {"dk_form", "/results/series/dk_form/points/0/value"},
            {"B0", "/results/B0"},
            {"liminf", sub + "/liminf"},
            {"lower_bound", "/results/lower_bound"},
            {"hypothesis_ok", "/results/hypothesis_ok"}};
  }
  if (task == "jm") {
    return {{"R", "/results/asymptote/series/lhs/points/0/R"},
            {"lhs", "/results/asymptote/series/lhs/points/0/value"},
            {"delta", "/results/deltas/0/delta"},
            {"rhs", "/results/deltas/0/rhs"},
            {"c_value", "/results/deltas/0/c_value"},
            {"k_inv", "/results/deltas/0/k_inv"},
            {"norm_exact", "/results/deltas/0/norm_exact"},
            {"norm_quadrature", "/results/deltas/0/norm_quadrature"},
            {"rhs_sup", "/results/rhs_sup"}};
  }
  if (task == "ode") {
    return {{"delta", "/results/gzjm/0/delta"},
            {"max_residual_first", "/results/gzjm/0/max_residual_first"},
            {"max_residual_second", "/results/gzjm/0/max_residual_second"},
            {"min_margin", "/results/gzjm/0/min_margin"},
            {"min_s_minus_floor", "/results/gzjm/0/min_s_minus_floor"},
            {"factor", "/results/gzjm/0/factor"},
            {"factor_sampled", "/results/gzjm/0/factor_sampled"},
            {"B0", "/results/gz/B0"},
            {"gz_factor", "/results/gz/factor"},
            {"gz_max_residual_first", "/results/gz/max_residual_first"}};
  }
  if (task == "audit") {
    return {{"m", "/results/m"},
            {"p", "/results/p"},
            {"B0", "/results/last_step/B0"},
            {"k0", "/results/last_step/k0"},
            {"lower_bound", "/results/last_step/lower_bound"},
            {"exact_sum", "/results/last_step/exact_sum"},
            {"limit", "/results/limit"},
            {"final_gap", "/results/final_gap"},
            {"extrapolated_gap", "/results/extrapolated_gap"}};
  }
  return {};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string display(const json& node) {
  if (node.is_boolean()) return node.get<bool>() ? "true" : "false";
  if (node.is_number_integer()) return node.dump();
  if (node.is_string()) return node.get<std::string>();
  if (node.is_object() && node.value("kind", "") == "exact") {
    if (node.value("infinite", false)) return "inf";
    return format_double(PiScaled(parse_rational(node["coeff"].get<std::string>()), node["pi_power"].get<int>()).value());
  }
  if (node.is_object() && node.value("kind", "") == "approx") {
    const json& v = node["value"];
    return v.is_string() ? v.get<std::string>() : format_double(v.get<double>());
  }
  return node.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool is_integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

ProblemSpec substitute(ProblemSpec spec, const std::string& param, double v) {
  if (param == "m" || param == "delta") {
    if (!is_integral(v) || v < 1) throw SpecError("--range", param + " must take positive integer values");
    const int k = static_cast<int>(std::lround(v));
    if (param == "m") spec.m = k;
    else spec.deltas = {k};
  } else if (param == "R") {
    spec.R_grid = {v};
  } else if (param == "B0") {
    spec.B0 = v;
  } else if (param == "t") {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    spec.t = buf;
  }
  validate(spec);
  return spec;
}

bool param_applies(const std::string& task, const std::string& param) {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"theta", {"t"}}, {"kernel", {"m"}},      {"effective-p", {"m"}}, {"dk", {"R", "B0"}},
      {"jm", {"R", "delta"}}, {"ode", {"delta", "B0"}}, {"audit", {"m", "B0"}}, {"verify-all", {}}};
  for (const auto& [t, params] : table) {
    if (t == task) return contains(params, param);
  }
  return false;
}

}  // namespace

// ---- public API ----

ProblemSpec parse_spec(const json& j) {
  if (!j.is_object()) throw SpecError("(root)", "expected a JSON object");
  reject_unknown(j, {"task", "weight", "f", "params"}, "");
  ProblemSpec s;
  if (!j.contains("task") || !j["task"].is_string()) throw SpecError("task", "required string");
  s.task = j["task"].get<std::string>();
  if (j.contains("weight")) {
    if (!j["weight"].is_array()) throw SpecError("weight", "expected an array of rational strings");
    for (std::size_t i = 0; i < j["weight"].size(); ++i) {
      const std::string field = "weight[" + std::to_string(i) + "]";
      parse_field_rational(j["weight"][i], field);
      s.weight.push_back(j["weight"][i].get<std::string>());
    }
  }
  if (j.contains("f")) {
    if (!j["f"].is_array()) throw SpecError("f", "expected an array of terms");
    for (std::size_t i = 0; i < j["f"].size(); ++i) {
      const json& t = j["f"][i];
      const std::string field = "f[" + std::to_string(i) + "]";
      if (!t.is_object()) throw SpecError(field, "expected {alpha, re, im}");
      reject_unknown(t, {"alpha", "re", "im"}, field + ".");
      TermSpec term;
      if (!t.contains("alpha") || !t["alpha"].is_array()) throw SpecError(field + ".alpha", "required integer array");
      for (std::size_t k = 0; k < t["alpha"].size(); ++k) {
        term.alpha.push_back(get_integer<int>(t["alpha"][k], field + ".alpha[" + std::to_string(k) + "]", 0));
      }
      for (const char* part : {"re", "im"}) {
        if (!t.contains(part)) continue;
        parse_field_rational(t[part], field + "." + part);
        (std::string(part) == "re" ? term.re : term.im) = t[part].get<std::string>();
      }
      s.f.push_back(term);
    }
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw SpecError("params", "expected an object");
    reject_unknown(p, {"t", "m", "R_grid", "B0", "deltas", "mc", "suite"}, "params.");
    if (p.contains("t")) {
      if (p["t"].is_string()) s.t = p["t"].get<std::string>();
      else if (p["t"].is_number()) s.t = p["t"].dump();
      else throw SpecError("params.t", "expected a number or rational string");
    }
    if (p.contains("m")) s.m = get_integer<int>(p["m"], "params.m", 1);
    if (p.contains("R_grid")) {
      if (!p["R_grid"].is_array()) throw SpecError("params.R_grid", "expected an array of numbers");
      for (std::size_t i = 0; i < p["R_grid"].size(); ++i) {
        s.R_grid.push_back(get_number(p["R_grid"][i], "params.R_grid[" + std::to_string(i) + "]"));
      }
    }
    if (p.contains("B0")) s.B0 = get_number(p["B0"], "params.B0");
    if (p.contains("deltas")) {
      if (!p["deltas"].is_array()) throw SpecError("params.deltas", "expected an array of integers");
      for (std::size_t i = 0; i < p["deltas"].size(); ++i) {
        s.deltas.push_back(get_integer<int>(p["deltas"][i], "params.deltas[" + std::to_string(i) + "]", 1));
      }
    }
    if (p.contains("mc")) {
      const json& mc = p["mc"];
      if (!mc.is_object()) throw SpecError("params.mc", "expected {seed, samples, partitions}");
      reject_unknown(mc, {"seed", "samples", "partitions"}, "params.mc.");
      McSpec spec;
      if (mc.contains("seed")) {
        if (!mc["seed"].is_number_unsigned()) throw SpecError("params.mc.seed", "expected a nonnegative integer");
        spec.seed = mc["seed"].get<std::uint64_t>();
      }
      if (mc.contains("samples")) spec.samples = get_integer<std::size_t>(mc["samples"], "params.mc.samples", 1);
      if (mc.contains("partitions")) {
        spec.partitions = get_integer<std::size_t>(mc["partitions"], "params.mc.partitions", 1);
      }
      s.mc = spec;
    }
    if (p.contains("suite")) {
      if (!p["suite"].is_string()) throw SpecError("params.suite", "expected \"fast\" or \"full\"");
      s.suite = p["suite"].get<std::string>();
    }
  }
  validate(s);
  return s;
}

ProblemSpec parse_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("(json)", e.what());
  }
  return parse_spec(j);
}

json to_json(const ProblemSpec& s) {
  json j = {{"task", s.task}};
  if (!s.weight.empty()) j["weight"] = s.weight;
  if (!s.f.empty()) {
    json f = json::array();
    for (const auto& t : s.f) f.push_back({{"alpha", t.alpha}, {"re", t.re}, {"im", t.im}});
    j["f"] = f;
  }
  json p = json::object();
  if (s.t) p["t"] = *s.t;
  if (s.m) p["m"] = *s.m;
  if (!s.R_grid.empty()) p["R_grid"] = s.R_grid;
  if (s.B0) p["B0"] = *s.B0;
  if (!s.deltas.empty()) p["deltas"] = s.deltas;
  if (s.mc) p["mc"] = {{"seed", s.mc->seed}, {"samples", s.mc->samples}, {"partitions", s.mc->partitions}};
  if (s.suite) p["suite"] = *s.suite;
  if (!p.empty()) j["params"] = p;
  return j;
}

json run_report(const ProblemSpec& spec) {
  validate(spec);
  Report r;
  if (spec.task == "theta") task_theta(spec, r);
  else if (spec.task == "kernel") task_kernel(spec, r);
  else if (spec.task == "effective-p") task_effective_p(spec, r);
  else if (spec.task == "dk") task_dk(spec, r);
  else if (spec.task == "jm") task_jm(spec, r);
  else if (spec.task == "ode") task_ode(spec, r);
  else if (spec.task == "audit") task_audit(spec, r);
  else task_verify(spec, r);
  return {{"task", spec.task},
          {"spec", to_json(spec)},
          {"results", r.results},
          {"checks", r.checks.list},
          {"notes", r.notes},
          {"discrepancies", r.discrepancies},
          {"pass", r.checks.all}};
}

std::vector<double> SweepRange::values() const {
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  for (long long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

SweepRange parse_range(const std::string& text) {
  SweepRange r;
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SpecError("--range", "malformed number '" + item + "' in '" + text + "'");
    }
  }
  if (parts.size() != 3) throw SpecError("--range", "expected a:b:step, got '" + text + "'");
  r.start = parts[0];
  r.stop = parts[1];
  r.step = parts[2];
  if (!(r.step > 0)) throw SpecError("--range", "step must be positive");
  if (!(r.start <= r.stop)) throw SpecError("--range", "start must not exceed stop");
  if ((r.stop - r.start) / r.step > 1e6) throw SpecError("--range", "more than 10^6 grid points");
  return r;
}

std::string SweepTable::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += "\r\n";
  };
  line(columns);
  for (const auto& row : rows) line(row);
  return out;
}

SweepTable run_sweep(const ProblemSpec& spec, const std::string& param, const SweepRange& range) {
  if (!contains(kSweepParams, param)) {
    throw SpecError("--param", "unknown sweep parameter '" + param + "' (expected m, R, B0, delta or t)");
  }
  if (!param_applies(spec.task, param)) throw SpecError("--param", param + " is not used by task " + spec.task);
  SweepTable table;
  const auto columns = columns_for(spec.task);
  table.columns.push_back("param_" + param);
  for (const auto& c : columns) table.columns.push_back(c.name);
  table.columns.push_back("pass");
  for (double v : range.values()) {
    const json report = run_report(substitute(spec, param, v));
    char label[32];
    std::snprintf(label, sizeof label, "%.15g", v);
    std::vector<std::string> row{label};
    for (const auto& c : columns) {
      const json::json_pointer ptr(c.pointer);
      row.push_back(report.contains(ptr) ? display(report.at(ptr)) : "");
    }
    const bool pass = report["pass"].get<bool>();
    row.push_back(pass ? "true" : "false");
    table.all_pass = table.all_pass && pass;
    table.rows.push_back(std::move(row));
  }
  return table;
}

int exit_code_for(const std::exception& e, std::string& message) {
  if (const auto* p = dynamic_cast<const PreconditionError*>(&e)) {
    message = "precondition failed [" + p->gate() + "]: " + p->what();
    return kPreconditionFailed;
  }
  if (const auto* s = dynamic_cast<const SpecError*>(&e)) {
    message = std::string("invalid input: ") + s->what();
    return kInputError;
  }
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const UnsupportedInput*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const json::exception*>(&e)) {
    message = std::string("invalid input: ") + e.what();
    return kInputError;
  }
  message = std::string("error: ") + e.what();
  return kCheckFailed;
}

}  // namespace effopen::cli
