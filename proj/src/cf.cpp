#include "pdsq/cf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pdsq/errors.hpp"
#include "pdsq/parallel.hpp"
#include "pdsq/summation.hpp"

namespace pdsq {

namespace {

constexpr std::size_t kChunk = 1 << 15;
constexpr std::size_t kBlock = 256;
// Grid points advanced by rotation between exact re-anchors.
constexpr std::size_t kAnchorStride = 32;

struct PhasorSum {
  CompensatedSum<double> re;
  CompensatedSum<double> im;
};

CfEstimate finish(double beta, double sum_re, double sum_im, std::size_t n) {
  const double scale = std::exp(0.5 * beta * beta);
  const auto count = static_cast<double>(n);
  const std::complex<double> mean(sum_re / count, sum_im / count);
  const double spread = std::max(0.0, 1.0 - std::norm(mean));
  return {mean * scale, std::sqrt(std::exp(beta * beta) * spread / count)};
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("cf_scan: empty grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0) throw InvalidArgument("cf_scan: grid must be finite and nonnegative");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw InvalidArgument("cf_scan: grid must be strictly increasing");
  }
}

bool is_uniform(std::span<const double> grid) {
  if (grid.size() < 3) return false;
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  const double tol = 1e-12 * std::max(1.0, grid.back());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - (grid.front() + static_cast<double>(k) * step)) > tol) return false;
  }
  return true;
}

// Phasor sums for a uniform grid over samples [begin, end).
void rotate_chunk(std::span<const double> x, double start, double step, std::size_t points,
                  std::vector<PhasorSum>& sums) {
  std::array<double, kBlock> c, s, cd, sd;
  for (std::size_t b0 = 0; b0 < x.size(); b0 += kBlock) {
    const std::size_t m = std::min(kBlock, x.size() - b0);
    for (std::size_t i = 0; i < m; ++i) {
      cd[i] = std::cos(step * x[b0 + i]);
      sd[i] = std::sin(step * x[b0 + i]);
    }
    for (std::size_t k = 0; k < points; ++k) {
      if (k % kAnchorStride == 0) {
        const double beta = start + static_cast<double>(k) * step;
        for (std::size_t i = 0; i < m; ++i) {
          c[i] = std::cos(beta * x[b0 + i]);
          s[i] = std::sin(beta * x[b0 + i]);
        }
      } else {
#pragma omp simd
        for (std::size_t i = 0; i < m; ++i) {
          const double cn = c[i] * cd[i] - s[i] * sd[i];
          const double sn = s[i] * cd[i] + c[i] * sd[i];
          c[i] = cn;
          s[i] = sn;
        }
      }
      double re = 0.0;
      double im = 0.0;
#pragma omp simd reduction(+ : re, im)
      for (std::size_t i = 0; i < m; ++i) {
        re += c[i];
        im += s[i];
      }
      sums[k].re += re;
      sums[k].im += im;
    }
  }
}

}  // namespace

CfEstimate empirical_cf(const QuadratureDataset& data, double beta) {
  if (data.samples.empty()) throw InvalidArgument("empirical_cf: empty dataset");
  if (beta == 0.0) return {{1.0, 0.0}, 0.0};
  const std::size_t n = data.size();
  std::vector<PhasorSum> partial(chunk_count(n, kChunk));
  parallel_for(partial.size(), [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t b0 = chunk * kChunk; b0 < end; b0 += kBlock) {
      const std::size_t b1 = std::min(end, b0 + kBlock);
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = b0; j < b1; ++j) {
        re += std::cos(beta * data.samples[j]);
        im += std::sin(beta * data.samples[j]);
      }
      partial[chunk].re += re;
      partial[chunk].im += im;
    }
  });
  PhasorSum total;
  for (const auto& p : partial) {
    total.re += p.re;
    total.im += p.im;
  }
  return finish(beta, total.re.value(), total.im.value(), n);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw InvalidArgument("uniform_grid: need at least one point");
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = lo + static_cast<double>(k) * step;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_cf_grid() { return uniform_grid(0.0, 4.0, 200); }

CfCurve cf_scan(const QuadratureDataset& data, std::span<const double> grid) {
  check_grid(grid);
  if (data.samples.empty()) throw InvalidArgument("cf_scan: empty dataset");
  CfCurve curve;
  curve.n = data.size();
  curve.betas.assign(grid.begin(), grid.end());
  curve.values.resize(grid.size());
  curve.sigmas.resize(grid.size());

  if (!is_uniform(grid)) {
    parallel_for(grid.size(), [&](std::size_t k) {
      const auto est = empirical_cf(data, grid[k]);
      curve.values[k] = est.value;
      curve.sigmas[k] = est.sigma;
    });
    return curve;
  }

  const std::size_t n = data.size();
  const std::size_t points = grid.size();
  const double start = grid.front();
  const double step = (grid.back() - grid.front()) / static_cast<double>(points - 1);
  std::vector<std::vector<PhasorSum>> partial(chunk_count(n, kChunk), std::vector<PhasorSum>(points));
  parallel_for(partial.size(), [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    rotate_chunk(std::span<const double>(data.samples).subspan(begin, end - begin), start, step, points,
                 partial[chunk]);
  });

  for (std::size_t k = 0; k < points; ++k) {
    if (grid[k] == 0.0) {
      curve.values[k] = {1.0, 0.0};
      curve.sigmas[k] = 0.0;
      continue;
    }
    PhasorSum total;
    for (const auto& p : partial) {
      total.re += p[k].re;
      total.im += p[k].im;
    }
    const auto est = finish(grid[k], total.re.value(), total.im.value(), n);
    curve.values[k] = est.value;
    curve.sigmas[k] = est.sigma;
  }
  return curve;
}

SignificanceReport significance(const CfCurve& curve, double threshold) {
  if (curve.size() == 0) throw InvalidArgument("significance: empty curve");
  if (!(threshold > 0.0)) throw InvalidArgument("significance: threshold must be positive");
  SignificanceReport report;
  report.beta_star = curve.betas.front();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (!(curve.sigmas[k] > 0.0)) continue;
    const double s = (std::abs(curve.values[k]) - 1.0) / curve.sigmas[k];
    if (s > best) {
      best = s;
      report.beta_star = curve.betas[k];
    }
  }
  report.s_star = std::isfinite(best) ? best : 0.0;
  report.detected = report.s_star >= threshold;
  return report;
}

}  // namespace pdsq
