#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pdsq/bootstrap.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/rng.hpp"
#include "pdsq/sampler.hpp"

namespace pdsq {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Agarwal matrix of normally ordered moments: entries(i, j) = <:x^{i+j}:> (0-based).
template <typename Scalar>
struct MomentMatrix {
  DenseMatrix<Scalar> entries;

  Eigen::Index dim() const { return entries.rows(); }
};

/// Hankel assembly from moments[0..2l-2]. Throws InvalidArgument when orders are missing.
template <typename Scalar>
MomentMatrix<Scalar> build_matrix(std::span<const Scalar> moments, int l) {
  if (l < 1) throw InvalidArgument("build_matrix: dimension must be positive");
  if (moments.size() < static_cast<std::size_t>(2 * l - 1)) {
    throw InvalidArgument("build_matrix: need moments of orders 0.." + std::to_string(2 * l - 2));
  }
  MomentMatrix<Scalar> m{DenseMatrix<Scalar>(l, l)};
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) m.entries(i, j) = moments[i + j];
  return m;
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
/// Rotations only touch pairs with a nonzero coupling, so exactly decoupled blocks
/// evolve independently of each other.
template <typename Derived>
typename Derived::Scalar min_eig_dense(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw InvalidArgument("min_eig_dense: matrix must be square");
  if (n == 0) throw InvalidArgument("min_eig_dense: empty matrix");
  if (n > 64) throw InvalidArgument("min_eig_dense: dimension above 64");

  DenseMatrix<Scalar> a = 0.5 * (input + input.transpose());
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Negligible against both diagonal entries: drop it.
        if (std::abs(apq) <= eps * Scalar(0.5) * std::abs(a(p, p)) &&
            std::abs(apq) <= eps * Scalar(0.5) * std::abs(a(q, q))) {
          a(p, q) = a(q, p) = Scalar(0);
          continue;
        }
        rotated = true;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Scalar arp = a(r, p);
          const Scalar arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
    if (!rotated) return a.diagonal().minCoeff();
  }
  throw AnalysisError("min_eig_dense: Jacobi sweeps did not converge");
}

struct CgOptions {
  double tol = 1e-12;             // residual target relative to max(1, ||M||_F)
  int max_iter = 10000;           // per start
  int random_restarts = 10;       // in addition to the coordinate basis vectors
  std::uint64_t seed = 0x5eed;
};

namespace detail {

// Lowest Ritz pair of M on span{x, d}; x and d orthonormal. Returns the 2-vector of weights.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> lowest_ritz(Scalar axx, Scalar axd, Scalar add) {
  const Scalar mean = Scalar(0.5) * (axx + add);
  const Scalar half_gap = Scalar(0.5) * (axx - add);
  const Scalar radius = std::hypot(half_gap, axd);
  const Scalar lambda = mean - radius;
  // (axx - lambda) u + axd v = 0; pick the better conditioned row.
  Eigen::Matrix<Scalar, 2, 1> w;
  if (std::abs(axx - lambda) >= std::abs(add - lambda)) {
    w << -axd, axx - lambda;
  } else {
    w << add - lambda, -axd;
  }
  const Scalar norm = w.norm();
  if (norm == Scalar(0)) return {Scalar(1), Scalar(0)};
  // Keep the component along x positive so the step stays continuous.
  if (w(0) < Scalar(0)) w = -w;
  return w / norm;
}

// Polak-Ribiere CG on the Rayleigh quotient from one start. Returns false on non-convergence.
template <typename Scalar>
bool rayleigh_cg(const DenseMatrix<Scalar>& m, DenseVector<Scalar> x, Scalar residual_target, int max_iter,
                 Scalar& lambda_out) {
  const Eigen::Index n = m.rows();
  x.normalize();
  DenseVector<Scalar> mx = m * x;
  Scalar lambda = x.dot(mx);
  DenseVector<Scalar> g = mx - lambda * x;
  DenseVector<Scalar> g_prev = g;
  DenseVector<Scalar> d = -g;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (g.norm() <= residual_target) {
      lambda_out = lambda;
      return true;
    }
    if (iter > 0) {
      // Restart every n steps and whenever the PR coefficient turns negative.
      Scalar beta = (iter % n == 0) ? Scalar(0) : g.dot(g - g_prev) / g_prev.squaredNorm();
      beta = std::max(beta, Scalar(0));
      d = -g + beta * d;
      if (d.dot(g) >= Scalar(0)) d = -g;
    }
    DenseVector<Scalar> dh = d - x.dot(d) * x;
    dh -= x.dot(dh) * x;
    const Scalar dn = dh.norm();
    if (!(dn > Scalar(0))) {
      lambda_out = lambda;
      return g.norm() <= residual_target;
    }
    dh /= dn;
    const DenseVector<Scalar> mdh = m * dh;
    const auto w = lowest_ritz<Scalar>(lambda, dh.dot(mx), dh.dot(mdh));
    x = w(0) * x + w(1) * dh;
    const Scalar xn = x.norm();
    x /= xn;
    mx = (w(0) * mx + w(1) * mdh) / xn;
    // Periodically recompute to shed accumulated drift in mx.
    if (iter % 16 == 15) mx = m * x;
    lambda = x.dot(mx);
    g_prev = g;
    g = mx - lambda * x;
  }
  lambda_out = lambda;
  return g.norm() <= residual_target;
}

}  // namespace detail

/// Smallest eigenvalue as the minimum of the Rayleigh quotient x'Mx / x'x, found by
/// nonlinear conjugate gradients with exact two-dimensional line searches. Runs from
/// every coordinate basis vector and from `random_restarts` seeded random vectors and
/// keeps the lowest converged value. Throws AnalysisError when no start converges.
template <typename Derived>
typename Derived::Scalar min_eig_cg(const Eigen::MatrixBase<Derived>& input, const CgOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw InvalidArgument("min_eig_cg: matrix must be square");
  if (n == 0) throw InvalidArgument("min_eig_cg: empty matrix");
  if (!(opts.tol > 0.0)) throw InvalidArgument("min_eig_cg: tol must be positive");

  const DenseMatrix<Scalar> m = Scalar(0.5) * (input + input.transpose());
  const Scalar scale = std::max(Scalar(1), m.norm());
  const Scalar residual_target =
      std::max(Scalar(opts.tol), Scalar(64) * std::numeric_limits<Scalar>::epsilon()) * scale;

  Scalar best = std::numeric_limits<Scalar>::infinity();
  bool any = false;
  auto attempt = [&](const DenseVector<Scalar>& start) {
    Scalar value;
    if (detail::rayleigh_cg<Scalar>(m, start, residual_target, opts.max_iter, value)) {
      any = true;
      best = std::min(best, value);
    }
  };
  for (Eigen::Index k = 0; k < n; ++k) attempt(DenseVector<Scalar>::Unit(n, k));
  const std::uint64_t key = derive_key(opts.seed, 3);
  for (int r = 0; r < opts.random_restarts; ++r) {
    RandomStream stream(key, static_cast<std::uint64_t>(r));
    DenseVector<Scalar> start(n);
    for (Eigen::Index k = 0; k < n; ++k) start(k) = Scalar(stream.next_normal());
    attempt(start);
  }
  if (!any) throw AnalysisError("min_eig_cg: no start converged within max_iter");
  return best;
}

struct MinEigResult {
  double lambda_min = 0.0;
  double sigma = 0.0;
  int l = 0;
  std::size_t replicates = 0;
};

/// lambda_min of M^(l) from the full dataset, with the standard deviation of
/// lambda_min over `replicates` datasets resampled with replacement.
MinEigResult bootstrap_min_eig(const QuadratureDataset& data, int l, std::size_t replicates, std::uint64_t seed);

/// Same for several dimensions from precomputed moments. `normal` must cover order 2 max(dims) - 2.
std::vector<MinEigResult> min_eig_with_errors(const std::vector<double>& normal,
                                              std::span<const ReplicateMoments> replicates, std::span<const int> dims);

}  // namespace pdsq
