#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "effopen/mc.hpp"
#include "effopen/toric.hpp"

namespace effopen::kernel {

using toric::ExponentVector;
using toric::ExtendedRational;
using toric::MonomialIdeal;
using toric::MonomialWeight;
using toric::PiScaled;
using toric::PolyFunction;

struct KernelResult {
  PiScaled k_inv;                // inf ||F1||_0^2 over admissible F1
  ExtendedRational jumping;      // c^F_0(phi)
  MonomialIdeal ideal;           // I_+(2 c phi)_0
  std::vector<ExponentVector> projected_support;  // monomials of F outside the ideal

  PiScaled kernel() const { return k_inv.reciprocal(); }
};

/// Generalized Bergman kernel at the origin of the unit polydisc, returned as its inverse
///   K^{-1}_{phi,F}(0) = inf{ ||F1||_0^2 : (F1 - F, 0) in I_+(2 c^F_0(phi) phi)_0 }.
///
/// The ideal is monomial and principal, (z^gamma). A holomorphic F1 in L^2(Delta^n) has its
/// germ in (z^gamma) iff every monomial of its Taylor series lies in the ideal, and the
/// monomials are orthogonal in L^2(Delta^n). Hence F1 = F - P F + h with P the projection onto
/// the ideal's monomials and h in the ideal, and ||F1||^2 >= ||F - P F||^2 with equality at
/// h = 0. The infimum is attained by the projection of F onto monomials outside the ideal.
///
/// When phi == 0 the jumping number is +inf and the weight carries no singularity; the
/// admissible set is taken to be F1(0) = F(0) (maximal ideal), which recovers the classical
/// Bergman kernel for F = 1.
KernelResult kernel_inv(const PolyFunction& f, const MonomialWeight& a);

/// C_{F, p phi}(0) = inf{ ||F1||_0^2 : (F1 - F, 0) in I(p phi)_0 }; zero iff F in I(p phi)_0.
PiScaled c_fp(const PolyFunction& f, const MonomialWeight& a, const Rational& p);

/// Classical Bergman kernel of the unit polydisc at its center, 1/pi^n.
/// Throws UnsupportedInput for any other point.
PiScaled classical_bergman(std::size_t n, std::span<const double> z0 = {});

/// ||1||^2_phi K(0) for phi = (1/p) log|z|^2 on the unit disc; equals p/(p-1) = 1/(1-1/p).
PiScaled sharpness_product(const Rational& p);

struct EffectivenessReport {
  PiScaled c1;  // ||F||^2_phi
  PiScaled c2;  // K^{-1}_{phi,F}(0)
  double ratio = 0;
  double p_effective = 0;
  double p_excess = 0;  // p_effective - 1, full relative precision
  double membership_p = 0;
  bool membership_verdict = false;
  double berndtsson_p = 0;
  KernelResult kernel;
};

/// Runs the effectiveness pipeline: C1 = ||F||^2_phi, C2 = K^{-1}_{phi,F}(0), p* = theta^{-1}(C1/C2),
/// and checks (F, 0) in I(p phi)_0 at p = p*(1 - 1e-9). Throws PreconditionError when C1
/// diverges (jumping number <= 1/2) or C2 vanishes.
EffectivenessReport effective_p_report(const PolyFunction& f, const MonomialWeight& a);

struct SemicontinuityMember {
  ExtendedRational jumping;
  PiScaled k_inv;        // generalized kernel inverse
  PiScaled c_phi;        // C_{F_m, phi_m}(0), the constant the proof actually bounds below
  bool jumping_ok = false;  // c^{F_m}(phi_m) >= c^F(phi)
};

enum class SemicontinuityVerdict {
  kHolds,                 // conclusion holds on the tail
  kHypothesisViolation,   // conclusion fails but inf_m C_{F_m,phi_m} = 0
  kCounterexample,        // conclusion fails although the hypothesis holds
};

std::string to_string(SemicontinuityVerdict v);

struct SemicontinuityReport {
  std::vector<SemicontinuityMember> members;
  ExtendedRational limit_jumping;
  PiScaled inf_k_inv;
  PiScaled inf_c_phi;
  bool stated_hypothesis_ok = false;  // inf_m K^{-1}_{phi_m,F_m}(0) > 0
  bool proof_hypothesis_ok = false;   // inf_m C_{F_m,phi_m}(0) > 0
  bool conclusion_ok = false;         // c^{F_m}(phi_m) >= c^F(phi) for every tail member
  SemicontinuityVerdict verdict = SemicontinuityVerdict::kHolds;
  std::string note;
};

/// Checks the lower semicontinuity of jumping numbers on a parametric toric family.
/// Members before `tail_start` are reported but excluded from the verdict.
SemicontinuityReport semicontinuity_check(std::span<const std::pair<PolyFunction, MonomialWeight>> family,
                                          const std::pair<PolyFunction, MonomialWeight>& limit,
                                          std::size_t tail_start = 0);

/// Importance-sampled estimate of \int_{Delta^n} |F|^2 e^{-p phi} in log-radial coordinates
/// t_j = -log|z_j|^2. Proposals are exponential with rate alpha_min_j + 1 - p a_j per coordinate,
/// which keeps every sample weight bounded. When the exact criterion says the integral diverges,
/// `divergent` is set and `refinement` holds estimates over {t_j <= T} for growing T.
mc::McEstimate mc_weighted_norm(const PolyFunction& f, const MonomialWeight& a, const Rational& p,
                                const mc::McConfig& config);

/// F(z) for complex z.
std::complex<double> evaluate(const PolyFunction& f, std::span<const std::complex<double>> z);

}  // namespace effopen::kernel
