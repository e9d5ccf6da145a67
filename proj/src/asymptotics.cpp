#include "effopen/asymptotics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "effopen/errors.hpp"

namespace effopen::asymptotics {

namespace {

Integer factorial(int k) {
  Integer out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

Integer binomial(int k, int i) { return factorial(k) / (factorial(i) * factorial(k - i)); }

Rational rational_power(const Rational& x, int k) {
  Rational out = 1;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

ExpPolynomial ExpPolynomial::exponential_density(const Rational& rate) {
  if (rate <= 0) throw DomainError("exponential rate must be positive");
  ExpPolynomial out;
  out.add(rate, 0, rate);
  return out;
}

ExpPolynomial ExpPolynomial::constant(const Rational& c) {
  ExpPolynomial out;
  out.add(c, 0, Rational(0));
  return out;
}

void ExpPolynomial::add(const Rational& coeff, int power, const Rational& rate) {
  if (coeff == 0) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->power == power && it->rate == rate) {
      it->coeff += coeff;
      if (it->coeff == 0) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({coeff, power, rate});
}

ExpPolynomial& ExpPolynomial::operator+=(const ExpPolynomial& other) {
  for (const auto& t : other.terms_) add(t.coeff, t.power, t.rate);
  return *this;
}

ExpPolynomial ExpPolynomial::scaled(const Rational& factor) const {
  ExpPolynomial out;
  for (const auto& t : terms_) out.add(t.coeff * factor, t.power, t.rate);
  return out;
}

ExpPolynomial ExpPolynomial::convolve_exponential(const Rational& lambda) const {
  if (lambda <= 0) throw DomainError("exponential rate must be positive");
  ExpPolynomial out;
  for (const auto& t : terms_) {
    // lambda e^{-lambda x} \int_0^x y^k e^{-(mu - lambda) y} dy
    const int k = t.power;
    const Rational gamma = t.rate - lambda;
    if (gamma == 0) {
      out.add(t.coeff * lambda / (k + 1), k + 1, lambda);
      continue;
    }
    const Rational lead = t.coeff * lambda * Rational(factorial(k)) / rational_power(gamma, k + 1);
    out.add(lead, 0, lambda);
    for (int i = 0; i <= k; ++i) {
      out.add(-lead * rational_power(gamma, i) / Rational(factorial(i)), i, t.rate);
    }
  }
  return out;
}

ExpPolynomial ExpPolynomial::tail() const {
  ExpPolynomial out;
  for (const auto& t : terms_) {
    if (t.rate <= 0) throw DomainError("tail requires positive rates");
    // \int_R^inf x^k e^{-mu x} dx = e^{-mu R} sum_i k!/(i! mu^{k-i+1}) R^i
    for (int i = 0; i <= t.power; ++i) {
      out.add(t.coeff * Rational(factorial(t.power)) / (Rational(factorial(i)) * rational_power(t.rate, t.power - i + 1)),
              i, t.rate);
    }
  }
  return out;
}

double ExpPolynomial::evaluate(double R) const { return evaluate_scaled(Rational(0), R); }

double ExpPolynomial::evaluate_scaled(const Rational& s, double R, double shift) const {
  const double x = R + shift;
  double sum = 0;
  for (const auto& t : terms_) {
    const Rational net = s - t.rate;
    double term = to_double(t.coeff) * std::pow(x, t.power);
    const double exponent = to_double(net) * R - to_double(t.rate) * shift;
    if (net != 0 || shift != 0) term *= std::exp(exponent);
    sum += term;
  }
  return sum;
}

ExpPolynomial hypoexponential_density(std::span<const Rational> rates) {
  if (rates.empty()) throw DomainError("hypoexponential density needs at least one rate");
  ExpPolynomial density = ExpPolynomial::exponential_density(rates[0]);
  for (std::size_t j = 1; j < rates.size(); ++j) density = density.convolve_exponential(rates[j]);
  return density;
}

ExpPolynomial weighted_exponential_tail(std::span<const Rational> coeffs, std::span<const Rational> rates) {
  if (coeffs.size() != rates.size()) throw DomainError("coefficient and rate lists differ in length");
  std::vector<Rational> pos, neg;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (rates[j] <= 0) throw DomainError("exponential rate must be positive");
    if (coeffs[j] > 0) pos.push_back(rates[j] / coeffs[j]);
    if (coeffs[j] < 0) neg.push_back(rates[j] / -coeffs[j]);
  }
  if (pos.empty()) return {};
  const ExpPolynomial tail_x = hypoexponential_density(pos).tail();
  if (neg.empty()) return tail_x;

  // P(X - Y > R) = \int_0^inf f_Y(y) P(X > R + y) dy for R >= 0.
  const ExpPolynomial density_y = hypoexponential_density(neg);
  ExpPolynomial out;
  for (const auto& tx : tail_x.terms()) {
    for (const auto& ty : density_y.terms()) {
      const Rational rate_sum = tx.rate + ty.rate;
      for (int i = 0; i <= tx.power; ++i) {
        const int moment = tx.power - i + ty.power;
        const Rational integral = Rational(factorial(moment)) / rational_power(rate_sum, moment + 1);
        out.add(tx.coeff * ty.coeff * Rational(binomial(tx.power, i)) * integral, i, tx.rate);
      }
    }
  }
  return out;
}

void SublevelQuery::validate() const {
  if (!(R >= 0)) throw DomainError("sublevel query requires R >= 0");
  if (B0 && !(*B0 > 0 && *B0 <= 1)) throw DomainError("sublevel query requires B0 in (0,1]");
  if (r && !(*r > 0 && *r < 1)) throw DomainError("sublevel query requires r in (0,1)");
}

double SublevelLaw::volume(double R) const { return scaled_volume(Rational(0), R); }

double SublevelLaw::scaled_volume(const Rational& s, double R) const {
  if (!(R >= 0)) throw DomainError("sublevel volume requires R >= 0");
  return std::pow(std::numbers::pi, pi_power) * tail.evaluate_scaled(s, R);
}

SublevelLaw sublevel_law(const MonomialWeight& a) {
  if (a.is_zero()) throw DomainError("sublevel volume requires some a_j > 0");
  const std::vector<Rational> ones(a.dimension(), Rational(1));
  return {static_cast<int>(a.dimension()), weighted_exponential_tail(a.coefficients(), ones)};
}

double sublevel_volume(const MonomialWeight& a, double R) { return sublevel_law(a).volume(R); }

double band_volume(const MonomialWeight& a, double R, double B0) {
  if (!(B0 > 0 && B0 <= 1)) throw DomainError("band volume requires B0 in (0,1]");
  if (!(R >= 0)) throw DomainError("band volume requires R >= 0");
  const SublevelLaw law = sublevel_law(a);
  const double scale = std::pow(std::numbers::pi, law.pi_power);
  return std::max(0.0, scale * (law.tail.evaluate(R) - law.tail.evaluate_scaled(Rational(0), R, B0)));
}

const AsymptoteSeries& AsymptoteReport::find(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no asymptote series named " + name);
}

namespace {

constexpr double kLiminfStart = 10.0;
constexpr double kBoundTolerance = 1e-9;

// Fits v(R) = L + A q^R through the last three points (Aitken's delta-squared).
double extrapolate(const std::vector<AsymptotePoint>& pts) {
  if (pts.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (pts.size() < 3) return pts.back().value;
  const double v1 = pts[pts.size() - 3].value, v2 = pts[pts.size() - 2].value, v3 = pts.back().value;
  const double d1 = v2 - v1, d2 = v3 - v2;
  if (std::abs(d2) <= 1e-13 * std::max(1.0, std::abs(v3))) return v3;
  // a contraction ratio near 1 is polynomial growth, not a convergent tail
  if (d1 * d2 > 0 && std::abs(d2) < 0.999 * std::abs(d1)) return v3 - d2 * d2 / (d2 - d1);
  if (d2 > 0) return std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

AsymptoteSeries make_series(std::string name, std::span<const double> grid, const std::function<double(double)>& value,
                            const PiScaled& bound, bool compare) {
  AsymptoteSeries s;
  s.name = std::move(name);
  s.bound = bound;
  s.compared = compare;
  const double b = bound.value();
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  double tail_min = std::numeric_limits<double>::infinity();
  double all_min = std::numeric_limits<double>::infinity();
  for (double R : sorted) {
    const double v = value(R);
    s.points.push_back({R, v, b, v - b});
    all_min = std::min(all_min, v);
    if (R >= kLiminfStart) tail_min = std::min(tail_min, v);
  }
  s.liminf_estimate = std::isfinite(tail_min) ? tail_min : all_min;
  s.extrapolation = extrapolate(s.points);
  s.bound_holds = compare && s.liminf_estimate >= b - kBoundTolerance * std::max(1.0, b);
  return s;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("R grid must not be empty");
  for (double R : grid) {
    if (!(R >= 0) || !std::isfinite(R)) throw DomainError("R grid values must be finite and >= 0");
  }
}

struct WeightedTail {
  double weight;  // |c_alpha|^2 prod 1/(alpha_j + 1), times pi^n outside
  ExpPolynomial tail;
};

}  // namespace

AsymptoteReport dk_asymptote_report(const PolyFunction& f, const MonomialWeight& a, std::span<const double> R_grid,
                                    double B0) {
  check_grid(R_grid);
  if (!(B0 > 0 && B0 <= 1)) throw DomainError("dk report requires B0 in (0,1]");
  if (f.is_zero()) throw DomainError("dk report requires F != 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  if (a.is_zero()) throw DomainError("dk report requires some a_j > 0");
  const std::size_t n = a.dimension();
  const double pi_n = std::pow(std::numbers::pi, static_cast<double>(n));

  AsymptoteReport report;
  report.hypothesis_ok = toric::weighted_norm_sq(f, a, Rational(1)).is_infinite();
  report.lower_bound = kernel::kernel_inv(f, a).k_inv;
  if (!report.hypothesis_ok) report.notes.push_back("hypothesis gate failed: |F|^2 e^{-phi} is integrable near 0");

  std::vector<WeightedTail> parts;
  for (const auto& [alpha, c] : f.terms()) {
    std::vector<Rational> rates;
    Rational w = c.norm_sq();
    for (std::size_t j = 0; j < n; ++j) {
      rates.emplace_back(alpha[j] + 1);
      w /= alpha[j] + 1;
    }
    parts.push_back({to_double(w), weighted_exponential_tail(a.coefficients(), rates)});
  }

  const Rational one(1);
  auto band = [&](double R) {
    double sum = 0;
    for (const auto& p : parts) {
      sum += p.weight * (std::exp(B0) * p.tail.evaluate_scaled(one, R) - p.tail.evaluate_scaled(one, R + B0));
    }
    return pi_n * sum / B0;
  };
  auto sublevel = [&](double R) {
    double sum = 0;
    for (const auto& p : parts) sum += p.weight * p.tail.evaluate_scaled(one, R);
    return pi_n * sum;
  };
  report.series.push_back(make_series("band", R_grid, band, report.lower_bound, report.hypothesis_ok));
  report.series.push_back(make_series("sublevel", R_grid, sublevel, report.lower_bound, report.hypothesis_ok));

  const auto c = toric::jumping_number(PolyFunction::constant(n), a);
  if (!c.infinite) {
    const MonomialWeight normalized = a.scaled(2 * c.value);
    const SublevelLaw law = sublevel_law(normalized);
    const PiScaled bound = kernel::kernel_inv(PolyFunction::constant(n), normalized).k_inv;
    report.series.push_back(make_series(
        "dk_form", R_grid, [&](double R) { return law.scaled_volume(one, R); }, bound, true));
  }
  return report;
}

double cone_integral(std::span<const double, 2> r1, std::span<const double, 2> r2, std::span<const double, 2> f) {
  const double f1 = f[0] * r1[0] + f[1] * r1[1];
  const double f2 = f[0] * r2[0] + f[1] * r2[1];
  if (!(f1 > 0 && f2 > 0)) return std::numeric_limits<double>::infinity();
  return std::abs(r1[0] * r2[1] - r1[1] * r2[0]) / (f1 * f2);
}

double cone_integral_quadrature(std::span<const double, 2> r1, std::span<const double, 2> r2,
                                std::span<const double, 2> f) {
  const double f1 = f[0] * r1[0] + f[1] * r1[1];
  const double f2 = f[0] * r2[0] + f[1] * r2[1];
  if (!(f1 > 0 && f2 > 0)) return std::numeric_limits<double>::infinity();
  double lo = std::atan2(r1[1], r1[0]);
  double hi = std::atan2(r2[1], r2[0]);
  if (lo > hi) std::swap(lo, hi);
  // \int_cone e^{-f.t} dt = \int dangle \int_0^inf rho e^{-rho f(omega)} drho = \int dangle / f(omega)^2
  auto integrand = [&](double ang) {
    const double g = f[0] * std::cos(ang) + f[1] * std::sin(ang);
    return 1.0 / (g * g);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-13);
}

namespace {

using RVec = std::vector<Rational>;

Rational dot(const RVec& x, const RVec& y) {
  Rational s = 0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

// Piecewise-linear exponent min(A.t, B.t) on the positive orthant, split into cones on which
// one of the two forms is active.
struct PiecewiseForm {
  RVec A, B;
  std::vector<RVec> rays;  // ordered from e1 to e_n

  Rational active(const RVec& r) const { return std::min(dot(A, r), dot(B, r)); }

  std::vector<std::pair<RVec, RVec>> cones() const {
    std::vector<std::pair<RVec, RVec>> out;
    for (std::size_t i = 0; i + 1 < rays.size(); ++i) out.emplace_back(rays[i], rays[i + 1]);
    return out;
  }
};

PiecewiseForm make_form(const RVec& A, const RVec& B) {
  PiecewiseForm form{A, B, {}};
  const std::size_t n = A.size();
  if (n == 1) {
    form.rays.push_back({Rational(1)});
    return form;
  }
  form.rays.push_back({Rational(1), Rational(0)});
  const Rational d1 = A[0] - B[0], d2 = A[1] - B[1];
  if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) form.rays.push_back({abs(d2), abs(d1)});
  form.rays.push_back({Rational(0), Rational(1)});
  return form;
}

// \int_{R_+^n} e^{-(h.t) + s min(A.t, B.t)} dt, exact and by quadrature; +inf if divergent.
std::pair<double, double> piecewise_integral(const PiecewiseForm& form, const RVec& h, const Rational& s) {
  const std::size_t n = h.size();
  if (n == 1) {
    const Rational rate = h[0] - s * form.active(form.rays[0]);
    if (rate <= 0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double k = to_double(rate);
    const double quad = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [k](double t) { return std::exp(-k * t); }, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
    return {1.0 / k, quad};
  }
  double exact = 0, quad = 0;
  for (const auto& [r1, r2] : form.cones()) {
    const RVec mid{r1[0] + r2[0], r1[1] + r2[1]};
    const RVec& lin = dot(form.A, mid) <= dot(form.B, mid) ? form.A : form.B;
    const std::array<double, 2> fvec{to_double(h[0] - s * lin[0]), to_double(h[1] - s * lin[1])};
    const std::array<double, 2> d1{to_double(r1[0]), to_double(r1[1])};
    const std::array<double, 2> d2{to_double(r2[0]), to_double(r2[1])};
    exact += cone_integral(d1, d2, fvec);
    quad += cone_integral_quadrature(d1, d2, fvec);
  }
  return {exact, quad};
}

}  // namespace

JmReport jm_asymptote_report(const PolyFunction& f, const MonomialWeight& a, std::span<const int> delta_list,
                             std::span<const double> R_grid) {
  check_grid(R_grid);
  if (delta_list.empty()) throw DomainError("jm report requires a nonempty delta list");
  for (int d : delta_list) {
    if (d < 1) throw DomainError("jm report requires delta >= 1");
  }
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  const std::size_t n = a.dimension();
  if (n > 2) throw UnsupportedInput("jm exact path supports n <= 2 only");
  if (!f.is_monomial()) throw UnsupportedInput("jm exact path requires F to be a monomial");
  const auto& [beta, coeff] = *f.terms().begin();
  if (coeff.norm_sq() != 1) throw UnsupportedInput("jm exact path requires a unimodular monomial coefficient");

  JmReport out;
  AsymptoteReport& report = out.asymptote;
  const auto c = toric::jumping_number(f, a);
  if (c.infinite) {
    report.hypothesis_ok = false;
    report.notes.push_back("jumping number is infinite: psi has no singularity along supp F");
    return out;
  }
  out.jumping = c.value;
  const MonomialWeight normalized = a.scaled(2 * c.value);
  out.normalized_weight = normalized.coefficients();
  report.hypothesis_ok = toric::weighted_norm_sq(f, normalized, Rational(1)).is_infinite();

  RVec ap = normalized.coefficients();
  RVec b(n), diff(n);
  for (std::size_t j = 0; j < n; ++j) {
    b[j] = Rational(beta[j]);
    diff[j] = ap[j] - b[j];
  }
  const std::vector<Rational> ones(n, Rational(1));
  const ExpPolynomial lhs_tail = weighted_exponential_tail(diff, ones);
  const double pi_n = std::pow(std::numbers::pi, static_cast<double>(n));

  bool first = true;
  for (int delta : delta_list) {
    JmDeltaRow row;
    row.delta = delta;
    RVec A(n), B(n), g(n), h(n);
    for (std::size_t j = 0; j < n; ++j) {
      A[j] = (1 + delta) * ap[j];
      B[j] = ap[j] + delta * b[j];
      g[j] = (1 + delta) * b[j];
      h[j] = g[j] + 1;
    }
    const PiecewiseForm form = make_form(A, B);
    std::optional<Rational> cw;
    for (const auto& r : form.rays) {
      const Rational m = form.active(r);
      if (m <= 0) continue;
      const Rational ratio = dot(h, r) / (2 * m);
      if (!cw || ratio < *cw) cw = ratio;
    }
    if (!cw) throw DomainError("piecewise weight has no singular direction");
    row.weight_jumping = *cw;

    std::vector<int> g_int(n);
    for (std::size_t j = 0; j < n; ++j) g_int[j] = (1 + delta) * beta[j];
    row.k_inv = toric::monomial_norm_sq(toric::ExponentVector(g_int));
    row.sup_factor = PiScaled(Rational(1), 0);
    row.c_value = row.k_inv * row.sup_factor.reciprocal();
    row.rhs = row.c_value * PiScaled(Rational(delta, delta + 1), 0);

    const auto [exact, quad] = piecewise_integral(form, h, 2 * *cw * Rational(999, 1000));
    row.norm_exact = pi_n * exact;
    row.norm_quadrature = pi_n * quad;
    row.diverges_at_threshold = std::isinf(piecewise_integral(form, h, 2 * *cw).first);

    if (first || row.rhs > out.rhs_sup) {
      out.rhs_sup = row.rhs;
      out.best_delta = delta;
      first = false;
    }
    out.deltas.push_back(row);
  }
  report.lower_bound = out.rhs_sup;
  report.notes.push_back("sup over the unit polydisc of e^{(1+delta) max{psi, 2 log|F|}} is 1");

  const Rational one(1);
  report.series.push_back(make_series(
      "lhs", R_grid, [&](double R) { return pi_n * lhs_tail.evaluate_scaled(one, R); }, out.rhs_sup,
      report.hypothesis_ok));

  if (n == 1 && beta[0] == 0 && ap[0] == 1) {
    report.notes.push_back(
        "discrepancy: reference value printed as 1/pi; the oracle gives pi (1/pi is K(0), the limit is K^{-1}(0))");
  }
  return out;
}

mc::McEstimate mc_sublevel(const WeightEvaluator& weight, std::size_t n, double R, const mc::McConfig& config) {
  if (n == 0) throw DomainError("mc_sublevel requires n >= 1");
  const double volume = std::pow(std::numbers::pi, static_cast<double>(n));
  auto sample = [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::complex<double>> z(n);
    for (auto& zj : z) zj = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    return weight(z) < -R ? volume : 0.0;
  };
  return mc::run_partitioned(config, sample);
}

RotatedFamilyReport rotated_family_check(double theta, const Rational& delta, const mc::McConfig& config) {
  if (!(theta > 0 && theta < std::numbers::pi / 4)) throw DomainError("rotated family requires theta in (0, pi/4)");
  if (!(delta > 0 && delta < 1)) throw DomainError("rotated family requires delta in (0,1)");
  RotatedFamilyReport out;
  out.theta = theta;
  out.delta = delta;
  out.threshold = 2 * std::numbers::pi * std::numbers::pi;

  const double d = to_double(delta);
  const double c = std::cos(theta), s = std::sin(theta);
  const double rho = c + s;  // |w| < cos + sin on the image of the bidisc
  const double expo = 2.0 - 2.0 * d;
  const double scale = 2.0 * std::numbers::pi * std::pow(rho, expo) / (expo * c * c);

  auto sample = [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::complex<double> z2 = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    const std::complex<double> w = std::polar(rho * std::pow(unit(rng), 1.0 / expo), 2.0 * std::numbers::pi * unit(rng));
    const std::complex<double> z1 = (w - z2 * s) / c;
    if (std::norm(z1) >= 1.0) return 0.0;
    // pi (uniform z2) times |z1|^2 |w|^{-2 delta} / (cos^2 q(w))
    return std::numbers::pi * std::norm(z1) * scale;
  };
  out.norm = mc::run_partitioned(config, sample);

  PolyFunction fw(2);
  fw.add_term({1, 0}, {Rational(1.0 / c), Rational(0)});
  fw.add_term({0, 1}, {Rational(-s / c), Rational(0)});
  const MonomialWeight aw{delta, Rational(0)};
  out.divergent_at_inverse_delta = toric::weighted_norm_sq(fw, aw, 1 / delta).is_infinite();
  out.integrable_at_one = !toric::weighted_norm_sq(fw, aw, Rational(1)).is_infinite();
  out.norm.divergent = false;
  out.below_threshold = out.norm.mean + 4 * out.norm.std_error < out.threshold;
  return out;
}

}  // namespace effopen::asymptotics
