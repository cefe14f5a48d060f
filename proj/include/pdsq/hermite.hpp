#pragma once

#include <cstdint>

#include "pdsq/errors.hpp"

namespace pdsq {

inline constexpr int kMaxHermiteOrder = 64;

/// (2n-1)!! as an exact integer; (-1)!! = 1. Exact in 64 bits for n <= 16.
constexpr std::uint64_t odd_double_factorial(int n) {
  if (n < 0 || n > 16) throw InvalidArgument("odd_double_factorial: n out of range [0, 16]");
  std::uint64_t r = 1;
  for (int k = 3; k <= 2 * n - 1; k += 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

/// Physicists' Hermite polynomial H_k(x) by the three-term recurrence
/// H_{k+1} = 2x H_k - 2k H_{k-1}.
template <typename Scalar>
constexpr Scalar hermite(int k, Scalar x) {
  if (k < 0 || k > kMaxHermiteOrder) throw InvalidArgument("hermite: order out of range [0, 64]");
  Scalar prev{1};
  if (k == 0) return prev;
  Scalar cur = Scalar{2} * x;
  for (int j = 1; j < k; ++j) {
    const Scalar next = Scalar{2} * x * cur - Scalar(2 * j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// H_k(x / sqrt 2) / 2^(k/2), the per-sample kernel of the normally ordered moment
/// estimator. Equal to the probabilists' polynomial He_k(x), evaluated with
/// He_{k+1} = x He_k - k He_{k-1} to avoid the sqrt(2) round trip.
template <typename Scalar>
constexpr Scalar scaled_hermite(int k, Scalar x) {
  if (k < 0 || k > kMaxHermiteOrder) throw InvalidArgument("scaled_hermite: order out of range [0, 64]");
  Scalar prev{1};
  if (k == 0) return prev;
  Scalar cur = x;
  for (int j = 1; j < k; ++j) {
    const Scalar next = x * cur - Scalar(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace pdsq
