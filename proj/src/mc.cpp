#include "effopen/mc.hpp"

#include <cmath>
#include <thread>

#include "effopen/errors.hpp"

namespace effopen::mc {

bool McEstimate::within(double exact, double sigmas) const {
  // A zero-variance estimator must reproduce the value up to rounding.
  const double slack = sigmas * std_error + 1e-12 * std::abs(exact);
  return std::abs(mean - exact) <= slack;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

McEstimate run_partitioned(const McConfig& config, const std::function<double(std::mt19937_64&)>& sample) {
  if (config.samples == 0) throw DomainError("Monte Carlo requires at least one sample");
  const std::size_t parts = std::max<std::size_t>(1, std::min(config.partitions, config.samples));

  struct Partial {
    double sum = 0;
    double sum_sq = 0;
    std::size_t count = 0;
  };
  std::vector<Partial> partials(parts);

  auto work = [&](std::size_t k) {
    std::mt19937_64 rng = substream(config.seed, k);
    const std::size_t count = config.samples / parts + (k < config.samples % parts ? 1 : 0);
    Partial p;
    p.count = count;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = sample(rng);
      p.sum += v;
      p.sum_sq += v * v;
    }
    partials[k] = p;
  };

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || parts == 1) {
    for (std::size_t k = 0; k < parts; ++k) work(k);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < parts; ++k) pool.emplace_back(work, k);
  }

  double sum = 0;
  double sum_sq = 0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(config.samples);
  McEstimate out;
  out.samples = config.samples;
  out.mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - out.mean * out.mean);
  out.std_error = config.samples > 1 ? std::sqrt(var * n / (n - 1) / n) : 0.0;
  return out;
}

}  // namespace effopen::mc
