#include <cmath>
#include <numbers>

#include "effopen/errors.hpp"
#include "effopen/kernel.hpp"

namespace effopen::kernel {

std::complex<double> evaluate(const PolyFunction& f, std::span<const std::complex<double>> z) {
  if (z.size() != f.dimension()) throw DomainError("evaluate: point dimension mismatch");
  std::complex<double> sum = 0;
  for (const auto& [alpha, c] : f.terms()) {
    std::complex<double> term(to_double(c.re), to_double(c.im));
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (int k = 0; k < alpha[j]; ++k) term *= z[j];
    }
    sum += term;
  }
  return sum;
}

mc::McEstimate mc_weighted_norm(const PolyFunction& f, const MonomialWeight& a, const Rational& p,
                                const mc::McConfig& config) {
  if (config.samples == 0) throw DomainError("mc_weighted_norm requires samples > 0");
  if (p < 0) throw DomainError("mc_weighted_norm requires p >= 0");
  if (f.dimension() != a.dimension()) throw DomainError("polynomial and weight dimensions differ");
  const std::size_t n = f.dimension();

  std::vector<double> pa(n);
  std::vector<double> rate(n);
  bool divergent = false;
  for (std::size_t j = 0; j < n; ++j) {
    pa[j] = to_double(p * a[j]);
    // Slowest decay rate in t_j among the terms of |F|^2 e^{-p phi}; computed exactly.
    std::optional<Rational> slowest;
    for (const auto& [alpha, c] : f.terms()) {
      Rational e = Rational(alpha[j] + 1) - p * a[j];
      if (!slowest || e < *slowest) slowest = e;
    }
    if (!slowest || *slowest <= 0) divergent = true;
    rate[j] = slowest ? to_double(*slowest) : 1.0;
  }

  auto integrand = [&](std::mt19937_64& rng, std::span<const double> t, double weight) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<std::complex<double>> z(n);
    double log_weight = std::log(weight);
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = std::polar(std::exp(-0.5 * t[j]), angle(rng));
      log_weight += pa[j] * t[j];
    }
    return std::norm(evaluate(f, z)) * std::exp(log_weight);
  };

  if (!divergent) {
    auto sample = [&](std::mt19937_64& rng) {
      std::vector<double> t(n);
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        std::exponential_distribution<double> draw(rate[j]);
        t[j] = draw(rng);
        // (1/2) e^{-t} dt dtheta over the proposal rate e^{-rate t} dt dtheta / (2 pi)
        w *= std::numbers::pi * std::exp(-(1.0 - rate[j]) * t[j]) / rate[j];
      }
      return integrand(rng, t, w);
    };
    return mc::run_partitioned(config, sample);
  }

  mc::McEstimate out;
  out.divergent = true;
  out.samples = config.samples;
  out.mean = std::numeric_limits<double>::infinity();
  out.std_error = std::numeric_limits<double>::quiet_NaN();
  for (double cutoff : {4.0, 8.0, 16.0, 32.0}) {
    auto sample = [&](std::mt19937_64& rng) {
      std::uniform_real_distribution<double> draw(0.0, cutoff);
      std::vector<double> t(n);
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        t[j] = draw(rng);
        w *= std::numbers::pi * cutoff * std::exp(-t[j]);
      }
      return integrand(rng, t, w);
    };
    out.refinement.emplace_back(cutoff, mc::run_partitioned(config, sample).mean);
  }
  return out;
}

}  // namespace effopen::kernel
