#include "effopen/kernel.hpp"

#include <algorithm>

#include "effopen/errors.hpp"
#include "effopen/scalars.hpp"

namespace effopen::kernel {

KernelResult kernel_inv(const PolyFunction& f, const MonomialWeight& a) {
  if (f.is_zero()) throw DomainError("kernel_inv requires F != 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");

  ExtendedRational c = toric::jumping_number(f, a);
  MonomialIdeal ideal = MonomialIdeal::maximal(f.dimension());
  if (!c.infinite) {
    std::vector<Rational> b(a.coefficients());
    for (auto& v : b) v *= 2 * c.value;
    ideal = toric::multiplier_ideal(b, /*plus=*/true);
  }

  KernelResult out{toric::projection_norm_sq(f, ideal), c, ideal, {}};
  for (const auto& [alpha, coeff] : f.terms()) {
    if (!ideal.contains(alpha)) out.projected_support.push_back(alpha);
  }
  return out;
}

PiScaled c_fp(const PolyFunction& f, const MonomialWeight& a, const Rational& p) {
  if (p < 0) throw DomainError("c_fp requires p >= 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  std::vector<Rational> b(a.coefficients());
  for (auto& v : b) v *= p;
  return toric::projection_norm_sq(f, toric::multiplier_ideal(b, /*plus=*/false));
}

PiScaled classical_bergman(std::size_t n, std::span<const double> z0) {
  if (n == 0) throw DomainError("classical_bergman requires n >= 1");
  if (std::any_of(z0.begin(), z0.end(), [](double x) { return x != 0.0; })) {
    throw UnsupportedInput("classical_bergman: only the polydisc center is supported");
  }
  return PiScaled(Rational(1), -static_cast<int>(n));
}

PiScaled sharpness_product(const Rational& p) {
  if (!(p > 1)) throw DomainError("sharpness_product requires p > 1");
  MonomialWeight phi{1 / p};
  PiScaled norm = toric::weighted_norm_sq(PolyFunction::constant(1), phi, Rational(1));
  return norm * classical_bergman(1);
}

EffectivenessReport effective_p_report(const PolyFunction& f, const MonomialWeight& a) {
  EffectivenessReport out;
  out.c1 = toric::weighted_norm_sq(f, a, Rational(1));
  if (out.c1.is_infinite()) {
    throw PreconditionError("jumping_number > 1/2",
                            "||F||^2_phi diverges: the jumping number c^F_0(phi) = " +
                                toric::to_string(toric::jumping_number(f, a)) + " must exceed 1/2");
  }
  out.kernel = kernel_inv(f, a);
  out.c2 = out.kernel.k_inv;
  if (out.c2.coefficient() == 0) {
    throw PreconditionError("K^{-1} > 0", "K^{-1}_{phi,F}(0) vanishes: F lies in the kernel ideal");
  }
  if (out.c1 < out.c2) throw InconsistentInput("C1 < C2 contradicts e^{-phi} >= 1");

  // Both sides carry pi^n, so the ratio is rational; round once here.
  out.ratio = to_double(out.c1.coefficient() / out.c2.coefficient());
  out.p_excess = scalars::theta_invert_excess(out.ratio);
  out.p_effective = 1.0 + out.p_excess;
  out.membership_p = out.p_effective * (1.0 - 1e-9);
  out.membership_verdict = toric::membership(f, a, Rational(out.membership_p));
  out.berndtsson_p = 1.0 + out.c2.value() / (200.0 * out.c1.value());
  return out;
}

std::string to_string(SemicontinuityVerdict v) {
  switch (v) {
    case SemicontinuityVerdict::kHolds:
      return "holds";
    case SemicontinuityVerdict::kHypothesisViolation:
      return "hypothesis-violation";
    case SemicontinuityVerdict::kCounterexample:
      return "counterexample";
  }
  return "unknown";
}

namespace {

bool at_least(const ExtendedRational& x, const ExtendedRational& y) {
  if (y.infinite) return x.infinite;
  if (x.infinite) return true;
  return x.value >= y.value;
}

}  // namespace

SemicontinuityReport semicontinuity_check(std::span<const std::pair<PolyFunction, MonomialWeight>> family,
                                          const std::pair<PolyFunction, MonomialWeight>& limit,
                                          std::size_t tail_start) {
  if (family.empty()) throw DomainError("semicontinuity_check requires a nonempty family");
  if (tail_start >= family.size()) throw DomainError("semicontinuity_check: tail is empty");

  SemicontinuityReport out;
  out.limit_jumping = toric::jumping_number(limit.first, limit.second);
  out.conclusion_ok = true;
  bool first = true;
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto& [f, a] = family[m];
    if (f.dimension() != limit.first.dimension()) throw DomainError("family dimension mismatch");
    SemicontinuityMember member;
    member.jumping = toric::jumping_number(f, a);
    member.k_inv = kernel_inv(f, a).k_inv;
    member.c_phi = c_fp(f, a, Rational(1));
    member.jumping_ok = at_least(member.jumping, out.limit_jumping);
    if (m >= tail_start) {
      if (first || member.k_inv < out.inf_k_inv) out.inf_k_inv = member.k_inv;
      if (first || member.c_phi < out.inf_c_phi) out.inf_c_phi = member.c_phi;
      first = false;
      out.conclusion_ok = out.conclusion_ok && member.jumping_ok;
    }
    out.members.push_back(std::move(member));
  }
  out.stated_hypothesis_ok = out.inf_k_inv.coefficient() > 0;
  out.proof_hypothesis_ok = out.inf_c_phi.coefficient() > 0;

  if (out.conclusion_ok) {
    out.verdict = SemicontinuityVerdict::kHolds;
  } else if (!out.proof_hypothesis_ok) {
    out.verdict = SemicontinuityVerdict::kHypothesisViolation;
    if (out.stated_hypothesis_ok) {
      out.note = "inf K^{-1}_{phi_m,F_m} > 0 but inf C_{F_m,phi_m} = 0: (F_m, 0) lies in I(phi_m)_0, "
                 "so |F_m|^2 e^{-phi_m} is integrable and the lower bound argument does not apply";
    }
  } else {
    out.verdict = SemicontinuityVerdict::kCounterexample;
  }
  return out;
}

}  // namespace effopen::kernel
