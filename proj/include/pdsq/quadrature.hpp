#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "pdsq/errors.hpp"

namespace pdsq {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 abscissae).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double integral;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [breaks.front(), breaks.back()].
/// Interior breakpoints seed the initial partition, which helps with sharply peaked
/// integrands. Throws AnalysisError if the error estimate does not reach
/// max(abs_tol, rel_tol * |I|) within the subdivision budget.
template <typename F>
double integrate(F&& f, std::span<const double> breaks, const QuadratureOptions& opts = {}) {
  if (breaks.size() < 2) throw InvalidArgument("integrate: need at least two breakpoints");
  std::priority_queue<detail::Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    const auto seg = detail::gauss_kronrod15(f, breaks[i], breaks[i + 1]);
    total += seg.integral;
    total_error += seg.error;
    heap.push(seg);
  }
  if (heap.empty()) return 0.0;

  const auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  int subdivisions = 0;
  while (total_error > target()) {
    if (subdivisions >= opts.max_subdivisions) {
      throw AnalysisError("adaptive quadrature did not converge: error estimate " +
                          std::to_string(total_error) + " > " + std::to_string(target()));
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw AnalysisError("adaptive quadrature: interval collapsed below machine resolution");
    }
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum from the final partition; the running total drifts by rounding.
  double exact = 0.0;
  while (!heap.empty()) {
    exact += heap.top().integral;
    heap.pop();
  }
  return exact;
}

template <typename F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  const std::array<double, 2> breaks = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), opts);
}

}  // namespace pdsq
