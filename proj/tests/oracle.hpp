// Independent reference computations for the unit tests. Deliberately naive:
// composite Simpson rules on fine grids, closed forms written out by hand.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "pdsq/sampler.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 20000) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Phase average of a pi-periodic f. Gaussian widths are integrated unwrapped over
// +-12 sigma, which is equivalent for periodic integrands.
inline double phase_mean(double sigma_rad, bool uniform, const std::function<double(double)>& f) {
  if (uniform) return simpson(f, 0.0, kPi) / kPi;
  if (sigma_rad == 0.0) return f(0.0);
  const double norm = 1.0 / (std::sqrt(2.0 * kPi) * sigma_rad);
  return simpson([&](double p) { return norm * std::exp(-p * p / (2 * sigma_rad * sigma_rad)) * f(p); },
                 -12 * sigma_rad, 12 * sigma_rad);
}

inline double variance_at(double vx, double vp, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return vx * c * c + vp * s * s;
}

inline double double_factorial_odd(int n) {  // (2n-1)!!
  double r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
  return r;
}

inline pdsq::QuadratureDataset dataset(std::vector<double> x) {
  pdsq::QuadratureDataset d;
  d.samples = std::move(x);
  return d;
}

}  // namespace oracle
