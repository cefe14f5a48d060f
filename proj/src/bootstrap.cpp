#include "pdsq/bootstrap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pdsq/errors.hpp"
#include "pdsq/parallel.hpp"
#include "pdsq/rng.hpp"
#include "pdsq/summation.hpp"

namespace pdsq {

namespace {

constexpr std::size_t kBlock = 256;
constexpr std::size_t kChunk = 1 << 16;
constexpr std::uint64_t kResamplePurpose = 2;

struct Accumulators {
  std::vector<CompensatedSum<double>> power;
  std::vector<CompensatedSum<double>> hermite;
  std::vector<CompensatedSum<double>> hermite_sq;
  CompensatedSum<double> weight;

  Accumulators(int power_order, int hermite_order, bool with_squares)
      : power(power_order + 1), hermite(hermite_order + 1), hermite_sq(with_squares ? hermite_order + 1 : 0) {}

  MomentSums finish() const {
    MomentSums out;
    for (const auto& s : power) out.power.push_back(s.value());
    for (const auto& s : hermite) out.hermite.push_back(s.value());
    for (const auto& s : hermite_sq) out.hermite_sq.push_back(s.value());
    out.weight = weight.value();
    return out;
  }
};

double block_sum(const std::array<double, kBlock>& v, std::size_t m) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < m; ++i) s += v[i];
  return s;
}

void accumulate_into(Accumulators& acc, std::span<const double> x, std::span<const std::uint16_t> counts, double shift) {
  const int power_order = static_cast<int>(acc.power.size()) - 1;
  const int hermite_order = static_cast<int>(acc.hermite.size()) - 1;
  const bool squares = !acc.hermite_sq.empty();
  std::array<double, kBlock> xb, w, y, p, h0, h1, sq;

  for (std::size_t b0 = 0; b0 < x.size(); b0 += kBlock) {
    const std::size_t m = std::min(kBlock, x.size() - b0);
    for (std::size_t i = 0; i < m; ++i) {
      xb[i] = x[b0 + i];
      w[i] = counts.empty() ? 1.0 : static_cast<double>(counts[b0 + i]);
      y[i] = xb[i] - shift;
    }
    const double wsum = block_sum(w, m);
    acc.weight += wsum;

    acc.power[0] += wsum;
    p = w;
    for (int k = 1; k <= power_order; ++k) {
#pragma omp simd
      for (std::size_t i = 0; i < m; ++i) p[i] *= y[i];
      acc.power[k] += block_sum(p, m);
    }

    // The recurrence is linear, so carrying the weight inside h0/h1 weights every order.
    acc.hermite[0] += wsum;
    if (squares) acc.hermite_sq[0] += wsum;
    if (hermite_order == 0) continue;
    h0 = w;
#pragma omp simd
    for (std::size_t i = 0; i < m; ++i) h1[i] = w[i] * xb[i];
    acc.hermite[1] += block_sum(h1, m);
    if (squares) {
#pragma omp simd
      for (std::size_t i = 0; i < m; ++i) sq[i] = h1[i] * h1[i];
      acc.hermite_sq[1] += block_sum(sq, m);
    }
    for (int k = 2; k <= hermite_order; ++k) {
      const double km1 = static_cast<double>(k - 1);
#pragma omp simd
      for (std::size_t i = 0; i < m; ++i) {
        const double next = xb[i] * h1[i] - km1 * h0[i];
        h0[i] = h1[i];
        h1[i] = next;
      }
      acc.hermite[k] += block_sum(h1, m);
      if (squares) {
#pragma omp simd
        for (std::size_t i = 0; i < m; ++i) sq[i] = h1[i] * h1[i];
        acc.hermite_sq[k] += block_sum(sq, m);
      }
    }
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

MomentSums accumulate_moments(std::span<const double> x, std::span<const std::uint16_t> counts, double shift,
                              int power_order, int hermite_order, bool with_squares) {
  if (power_order < 0 || hermite_order < 0) throw InvalidArgument("accumulate_moments: negative order");
  if (!counts.empty() && counts.size() != x.size()) throw InvalidArgument("accumulate_moments: counts size mismatch");
  if (with_squares && !counts.empty()) throw InvalidArgument("accumulate_moments: squares need unit weights");

  std::vector<Accumulators> partial(chunk_count(x.size(), kChunk),
                                    Accumulators(power_order, hermite_order, with_squares));
  parallel_for(partial.size(), [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunk;
    const std::size_t len = std::min(kChunk, x.size() - begin);
    accumulate_into(partial[chunk], x.subspan(begin, len), counts.empty() ? counts : counts.subspan(begin, len), shift);
  });

  Accumulators total(power_order, hermite_order, with_squares);
  for (const auto& part : partial) {
    for (std::size_t k = 0; k < total.power.size(); ++k) total.power[k] += part.power[k];
    for (std::size_t k = 0; k < total.hermite.size(); ++k) total.hermite[k] += part.hermite[k];
    for (std::size_t k = 0; k < total.hermite_sq.size(); ++k) total.hermite_sq[k] += part.hermite_sq[k];
    total.weight += part.weight;
  }
  return total.finish();
}

std::vector<double> central_from_sums(const MomentSums& sums, int order) {
  if (order + 1 > static_cast<int>(sums.power.size())) throw InvalidArgument("central_from_sums: order too high");
  std::vector<double> raw(order + 1);
  for (int k = 0; k <= order; ++k) raw[k] = sums.power[k] / sums.weight;
  const double d = order >= 1 ? raw[1] : 0.0;
  std::vector<double> central(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double m = 0.0;
    for (int i = 0; i <= k; ++i) m += binomial(k, i) * raw[i] * std::pow(-d, k - i);
    central[k] = m;
  }
  central[0] = 1.0;
  if (order >= 1) central[1] = 0.0;
  return central;
}

std::vector<double> normal_from_sums(const MomentSums& sums, int order) {
  if (order + 1 > static_cast<int>(sums.hermite.size())) throw InvalidArgument("normal_from_sums: order too high");
  std::vector<double> normal(order + 1);
  for (int k = 0; k <= order; ++k) normal[k] = sums.hermite[k] / sums.weight;
  normal[0] = 1.0;
  return normal;
}

std::vector<std::uint16_t> resample_counts(std::size_t n, std::uint64_t seed, std::size_t replicate) {
  std::vector<std::uint16_t> counts(n, 0);
  RandomStream stream(derive_key(seed, kResamplePurpose), replicate);
  for (std::size_t j = 0; j < n; ++j) {
    auto& c = counts[stream.next_below(n)];
    if (c == std::numeric_limits<std::uint16_t>::max()) {
      throw AnalysisError("resample_counts: sample multiplicity overflow");
    }
    ++c;
  }
  return counts;
}

std::vector<ReplicateMoments> bootstrap_moments(const QuadratureDataset& data, int central_order, int normal_order,
                                                std::size_t replicates, std::uint64_t seed) {
  if (data.size() < 2) throw InvalidArgument("bootstrap_moments: need at least two samples");
  const std::span<const double> x(data.samples);
  CompensatedSum<double> total;
  for (double v : x) total += v;
  const double shift = total.value() / static_cast<double>(x.size());

  std::vector<ReplicateMoments> out(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    const auto counts = resample_counts(x.size(), seed, r);
    // Replicates already run in parallel; sum each one sequentially.
    Accumulators acc(central_order, normal_order, false);
    accumulate_into(acc, x, counts, shift);
    const MomentSums sums = acc.finish();
    out[r].central = central_from_sums(sums, central_order);
    out[r].normal = normal_from_sums(sums, normal_order);
  });
  return out;
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  CompensatedSum<double> sum;
  for (double v : values) sum += v;
  const double mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum<double> sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
}

}  // namespace pdsq
