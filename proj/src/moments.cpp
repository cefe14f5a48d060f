#include "pdsq/moments.hpp"

#include <cmath>

#include "pdsq/errors.hpp"
#include "pdsq/summation.hpp"

namespace pdsq {

namespace {

void check_order(int max_order) {
  if (max_order < 0 || max_order > kMaxMomentOrder) {
    throw InvalidArgument("moment order must lie in [0, " + std::to_string(kMaxMomentOrder) + "]");
  }
}

double mean_of(const QuadratureDataset& data) {
  CompensatedSum<double> sum;
  for (double v : data.samples) sum += v;
  return sum.value() / static_cast<double>(data.size());
}

}  // namespace

MomentSet moment_set(const QuadratureDataset& data, int max_order) {
  check_order(max_order);
  if (data.samples.empty()) throw InvalidArgument("moment_set: empty dataset");
  MomentSet set;
  set.max_order = max_order;
  set.n = data.size();
  set.mean = mean_of(data);

  const MomentSums sums = accumulate_moments(data.samples, {}, set.mean, max_order, max_order, true);
  set.central = central_from_sums(sums, max_order);
  set.normal = normal_from_sums(sums, max_order);
  set.normal_se.assign(max_order + 1, 0.0);
  const auto n = static_cast<double>(set.n);
  for (int k = 1; k <= max_order; ++k) {
    const double variance = std::max(0.0, sums.hermite_sq[k] / n - set.normal[k] * set.normal[k]);
    set.normal_se[k] = std::sqrt(variance / n);
  }
  return set;
}

std::vector<double> central_moments(const QuadratureDataset& data, int max_order) {
  if (data.size() < 2) throw InvalidArgument("central_moments: need at least two samples");
  if (max_order < 2) throw InvalidArgument("central_moments: max_order must be at least 2");
  check_order(max_order);
  const double mean = mean_of(data);
  return central_from_sums(accumulate_moments(data.samples, {}, mean, max_order, 0), max_order);
}

std::vector<double> normally_ordered_moments(const QuadratureDataset& data, int max_order) {
  check_order(max_order);
  if (data.samples.empty()) throw InvalidArgument("normally_ordered_moments: empty dataset");
  return normal_from_sums(accumulate_moments(data.samples, {}, 0.0, 0, max_order), max_order);
}

double hong_mandel_degree(const std::vector<double>& central, int order) {
  if (order < 2 || order % 2 != 0) throw InvalidArgument("hong_mandel_degree: order must be even and >= 2");
  if (order >= static_cast<int>(central.size())) throw InvalidArgument("hong_mandel_degree: order not available");
  return central[order] / static_cast<double>(odd_double_factorial(order / 2)) - 1.0;
}

SqueezingDegrees squeezing_degrees(const std::vector<double>& central, std::span<const ReplicateMoments> replicates,
                                   int n_max) {
  SqueezingDegrees out;
  out.replicates = replicates.size();
  std::vector<double> values(replicates.size());
  for (int n = 1; n <= n_max; ++n) {
    const int order = 2 * n;
    out.orders.push_back(order);
    out.q.push_back(hong_mandel_degree(central, order));
    for (std::size_t r = 0; r < replicates.size(); ++r) values[r] = hong_mandel_degree(replicates[r].central, order);
    out.sigmas.push_back(sample_std(values));
  }
  return out;
}

SqueezingDegrees hong_mandel_q(const QuadratureDataset& data, int n_max, std::size_t replicates, std::uint64_t seed) {
  if (n_max < 1 || 2 * n_max > kMaxMomentOrder) throw InvalidArgument("hong_mandel_q: n_max out of range");
  const auto central = central_moments(data, 2 * n_max);
  const auto boot = bootstrap_moments(data, 2 * n_max, 0, replicates, seed);
  return squeezing_degrees(central, boot, n_max);
}

}  // namespace pdsq
