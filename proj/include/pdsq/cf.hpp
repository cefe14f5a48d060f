#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pdsq/sampler.hpp"

namespace pdsq {

struct CfEstimate {
  std::complex<double> value;
  double sigma;
};

/// Empirical characteristic function of the P function along the measured quadrature:
/// value = e^{beta^2/2} (1/N) sum_j e^{i beta x_j}, sigma^2 = (e^{beta^2} - |value|^2) / N.
/// beta = 0 gives (1, 0) exactly.
CfEstimate empirical_cf(const QuadratureDataset& data, double beta);

struct CfCurve {
  std::vector<double> betas;
  std::vector<std::complex<double>> values;
  std::vector<double> sigmas;
  std::size_t n = 0;

  std::size_t size() const { return betas.size(); }
};

/// `points` uniform values on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);
/// 200 points on [0, 4].
std::vector<double> default_cf_grid();

/// empirical_cf over a strictly increasing, nonnegative grid. Uniform grids are
/// evaluated by phasor rotation from periodically re-anchored exact values.
CfCurve cf_scan(const QuadratureDataset& data, std::span<const double> grid);

struct SignificanceReport {
  double beta_star = 0.0;
  double s_star = 0.0;
  bool detected = false;
};

/// Largest s(beta) = (|value| - 1) / sigma over grid points with sigma > 0.
/// When no point has sigma > 0 the report carries s_star = 0 and beta_star = betas[0].
SignificanceReport significance(const CfCurve& curve, double threshold);

}  // namespace pdsq
