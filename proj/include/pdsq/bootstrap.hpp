#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdsq/sampler.hpp"

namespace pdsq {

/// Weighted power and Hermite sums over a sample:
///   power[k]   = sum_j w_j (x_j - shift)^k,   k = 0..power_order
///   hermite[k] = sum_j w_j He_k(x_j),          k = 0..hermite_order
///   hermite_sq[k] = sum_j He_k(x_j)^2 (unweighted path only, when requested)
struct MomentSums {
  std::vector<double> power;
  std::vector<double> hermite;
  std::vector<double> hermite_sq;
  double weight = 0.0;
};

/// Accumulates MomentSums over x with integer weights `counts` (empty = all ones).
/// Block partial sums feed compensated accumulators, one per order.
MomentSums accumulate_moments(std::span<const double> x, std::span<const std::uint16_t> counts, double shift,
                              int power_order, int hermite_order, bool with_squares = false);

/// Central moments (k = 0..order) from power sums taken about an arbitrary shift.
std::vector<double> central_from_sums(const MomentSums& sums, int order);
/// Normally ordered moments <:x^k:> = hermite[k] / weight.
std::vector<double> normal_from_sums(const MomentSums& sums, int order);

/// Multiplicity of each sample in bootstrap replicate `replicate`: N indices drawn
/// uniformly with replacement from substream `replicate` of the seed's resampling key.
std::vector<std::uint16_t> resample_counts(std::size_t n, std::uint64_t seed, std::size_t replicate);

struct ReplicateMoments {
  std::vector<double> central;
  std::vector<double> normal;
};

/// Central (to central_order) and normally ordered (to normal_order) moments of each
/// resampled replicate. Replicates run in parallel; each owns its substream, so the
/// result depends only on (data, orders, replicates, seed).
std::vector<ReplicateMoments> bootstrap_moments(const QuadratureDataset& data, int central_order, int normal_order,
                                                std::size_t replicates, std::uint64_t seed);

/// Sample standard deviation (N - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> values);

}  // namespace pdsq
