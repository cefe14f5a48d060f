#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdsq/bootstrap.hpp"
#include "pdsq/hermite.hpp"
#include "pdsq/sampler.hpp"

namespace pdsq {

inline constexpr int kMaxMomentOrder = 20;

struct MomentSet {
  int max_order = 0;
  std::vector<double> central;    // <(Delta x)^k>, k = 0..max_order
  std::vector<double> normal;     // <:x^k:>, k = 0..max_order
  std::vector<double> normal_se;  // plug-in standard error of each normal[k]
  double mean = 0.0;
  std::size_t n = 0;
};

/// All sample moments to max_order (<= 20) in one pass over the data.
MomentSet moment_set(const QuadratureDataset& data, int max_order);

/// (1/N) sum (x_j - mean)^k for k = 0..max_order. Requires N >= 2, max_order >= 2.
std::vector<double> central_moments(const QuadratureDataset& data, int max_order);

/// Hermite sampling estimator (1 / (2^{k/2} N)) sum H_k(x_j / sqrt 2), k = 0..max_order <= 20.
std::vector<double> normally_ordered_moments(const QuadratureDataset& data, int max_order);

/// Hong-Mandel degrees q_{2n} for 2n = 2, 4, ..., with bootstrap standard deviations.
struct SqueezingDegrees {
  std::vector<int> orders;
  std::vector<double> q;
  std::vector<double> sigmas;
  std::size_t replicates = 0;
};

/// q_{2n} = <(Delta x)^{2n}> / (2n-1)!! - 1 from a central-moment vector.
double hong_mandel_degree(const std::vector<double>& central, int order);

/// Degrees for 2n = 2..2 n_max. Sigmas come from `replicates` resampled datasets.
SqueezingDegrees hong_mandel_q(const QuadratureDataset& data, int n_max, std::size_t replicates = 100,
                               std::uint64_t seed = 0);

/// Same, from precomputed point moments and bootstrap replicates.
SqueezingDegrees squeezing_degrees(const std::vector<double>& central, std::span<const ReplicateMoments> replicates,
                                   int n_max);

}  // namespace pdsq
