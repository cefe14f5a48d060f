#include "pdsq/matrices.hpp"

#include <algorithm>

#include "pdsq/moments.hpp"

namespace pdsq {

namespace {

double lambda_from(std::span<const double> normal, int l) {
  return min_eig_cg(build_matrix<double>(normal, l).entries);
}

}  // namespace

std::vector<MinEigResult> min_eig_with_errors(const std::vector<double>& normal,
                                              std::span<const ReplicateMoments> replicates, std::span<const int> dims) {
  std::vector<MinEigResult> out;
  std::vector<double> values(replicates.size());
  for (int l : dims) {
    MinEigResult res;
    res.l = l;
    res.replicates = replicates.size();
    res.lambda_min = lambda_from(normal, l);
    for (std::size_t r = 0; r < replicates.size(); ++r) values[r] = lambda_from(replicates[r].normal, l);
    res.sigma = sample_std(values);
    out.push_back(res);
  }
  return out;
}

MinEigResult bootstrap_min_eig(const QuadratureDataset& data, int l, std::size_t replicates, std::uint64_t seed) {
  if (replicates < 2) throw InvalidArgument("bootstrap_min_eig: need at least two replicates");
  if (l < 1 || 2 * l - 2 > kMaxMomentOrder) throw InvalidArgument("bootstrap_min_eig: dimension out of range");
  const int order = 2 * l - 2;
  const auto normal = normally_ordered_moments(data, order);
  const auto boot = bootstrap_moments(data, 0, order, replicates, seed);
  const int dims[] = {l};
  return min_eig_with_errors(normal, boot, dims).front();
}

}  // namespace pdsq
