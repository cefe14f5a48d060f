#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/rng.hpp"
#include "pdsq/sampler.hpp"

using namespace pdsq;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  using B = Philox4x32::Block;
  EXPECT_EQ(Philox4x32::generate(0, B{0, 0, 0, 0}), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate(0xffffffffffffffffull, B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}),
            (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate(0x299f31d0a4093822ull, B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}),
            (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, UniformRangeAndMoments) {
  RandomStream s(derive_key(7, 1), 0);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sum2 / n, 1.0 / 3, 0.005);
}

TEST(RandomStream, SubstreamsAreAddressable) {
  RandomStream a(derive_key(1, 1), 5);
  RandomStream b(derive_key(1, 1), 5);
  RandomStream c(derive_key(1, 1), 6);
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
  }
  EXPECT_NE(derive_key(1, 1), derive_key(1, 2));
  EXPECT_NE(derive_key(1, 1), derive_key(2, 1));
}

TEST(RandomStream, NextBelowStaysInRange) {
  RandomStream s(derive_key(3, 2), 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = s.next_below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Sampler, RejectsEmptyRequest) {
  EXPECT_THROW(sample_quadratures(vacuum_model(), {}, 0, 1), InvalidArgument);
}

TEST(Sampler, DeterministicAndPrefixStable) {
  const StateModel model{validate_params(0.36, 5.28), PhaseNoiseModel::gaussian(Angle::degrees(12.6))};
  const auto a = sample_quadratures(model, {}, 100000, 9);
  const auto b = sample_quadratures(model, {}, 100000, 9);
  const auto c = sample_quadratures(model, {}, 1000, 9);
  const auto d = sample_quadratures(model, {}, 1000, 10);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_TRUE(std::equal(c.samples.begin(), c.samples.end(), a.samples.begin()));
  EXPECT_NE(c.samples, d.samples);
  EXPECT_EQ(a.meta.seed, 9u);
  ASSERT_TRUE(a.meta.model.has_value());
  EXPECT_EQ(*a.meta.model, model);
  EXPECT_FALSE(a.meta.created.has_value());
}

TEST(Sampler, DeltaAndZeroWidthGaussianCoincide) {
  const auto params = validate_params(0.36, 5.28);
  const auto a = sample_quadratures({params, PhaseNoiseModel::delta()}, Angle::degrees(20), 5000, 4);
  const auto b = sample_quadratures({params, PhaseNoiseModel::gaussian(Angle::radians(0))}, Angle::degrees(20), 5000, 4);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Sampler, VarianceFollowsModel) {
  const StateModel model{validate_params(0.36, 5.28), PhaseNoiseModel::delta()};
  for (double deg : {0.0, 30.0, 90.0}) {
    const auto d = sample_quadratures(model, Angle::degrees(deg), 400000, 2);
    double s2 = 0;
    for (double x : d.samples) s2 += x * x;
    const double v = oracle::variance_at(0.36, 5.28, deg * oracle::kPi / 180);
    EXPECT_NEAR(s2 / d.size(), v, 5 * v * std::sqrt(2.0 / d.size())) << deg;
  }
}

TEST(Sampler, UniformPhaseIsUniform) {
  // One-sample Kolmogorov-Smirnov against U[0, pi).
  const auto noise = PhaseNoiseModel::uniform();
  RandomStream s(derive_key(11, 1), 0);
  std::vector<double> phi(20000);
  for (auto& p : phi) {
    p = sample_phase(noise, s).rad();
    ASSERT_GE(p, 0.0);
    ASSERT_LT(p, oracle::kPi);
  }
  std::sort(phi.begin(), phi.end());
  double d = 0;
  const double n = phi.size();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double f = phi[i] / oracle::kPi;
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  EXPECT_LT(d * std::sqrt(n), 1.63);  // 1% critical value
}

TEST(Sampler, UniformNoiseMakesTheAngleIrrelevant) {
  // Two-sample Kolmogorov-Smirnov between measurement angles 0 and 50 degrees.
  const StateModel model{validate_params(0.36, 5.28), PhaseNoiseModel::uniform()};
  auto a = sample_quadratures(model, Angle::degrees(0), 20000, 21).samples;
  auto b = sample_quadratures(model, Angle::degrees(50), 20000, 22).samples;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  EXPECT_LT(d * std::sqrt(a.size() * b.size() / double(a.size() + b.size())), 1.63);
}
