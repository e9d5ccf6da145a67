#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace effopen::mc {

struct McConfig {
  std::uint64_t seed = 20140301;
  std::size_t samples = 100000;
  std::size_t partitions = 8;
};

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
  /// Set from the exact integrability criterion, never from the samples.
  bool divergent = false;
  /// Truncated-domain estimates (cutoff, value) showing growth when divergent.
  std::vector<std::pair<double, double>> refinement;

  bool within(double exact, double sigmas) const;
};

/// Independent generator for substream `stream` of the master seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

/// Draws config.samples values of `sample`, split into config.partitions substreams.
/// Partition k always uses substream(seed, k) and a fixed sample count, and partial sums are
/// combined in partition order, so the result depends only on (seed, samples, partitions).
McEstimate run_partitioned(const McConfig& config, const std::function<double(std::mt19937_64&)>& sample);

}  // namespace effopen::mc
