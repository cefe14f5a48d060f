#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/hermite.hpp"
#include "pdsq/quadrature.hpp"
#include "pdsq/states.hpp"

using namespace pdsq;
using oracle::kPi;

namespace {

constexpr double kVx = 0.36;
constexpr double kVp = 5.28;

StateModel gaussian_deg(double deg) { return {validate_params(kVx, kVp), PhaseNoiseModel::gaussian(Angle::degrees(deg))}; }
StateModel uniform_model() { return {validate_params(kVx, kVp), PhaseNoiseModel::uniform()}; }
StateModel delta_model() { return {validate_params(kVx, kVp), PhaseNoiseModel::delta()}; }

}  // namespace

TEST(Params, SwapsIntoCanonicalOrder) {
  const auto p = validate_params(5.28, 0.36);
  EXPECT_EQ(p.v_x(), 0.36);
  EXPECT_EQ(p.v_p(), 5.28);
}

TEST(Params, RejectsUncertaintyViolationAndBadValues) {
  EXPECT_THROW(validate_params(0.5, 1.5), InvalidArgument);
  EXPECT_THROW(validate_params(0.0, 5.0), InvalidArgument);
  EXPECT_THROW(validate_params(-1.0, -2.0), InvalidArgument);
  EXPECT_THROW(validate_params(NAN, 2.0), InvalidArgument);
  EXPECT_THROW(validate_params(0.5, INFINITY), InvalidArgument);
  EXPECT_NO_THROW(validate_params(0.5, 2.0));
  EXPECT_NO_THROW(validate_params(1.0, 1.0));
}

TEST(Params, GaussianWidthMustBeFiniteAndNonnegative) {
  EXPECT_THROW(PhaseNoiseModel::gaussian(Angle::radians(-0.1)), InvalidArgument);
  EXPECT_THROW(PhaseNoiseModel::gaussian(Angle::radians(INFINITY)), InvalidArgument);
  EXPECT_TRUE(PhaseNoiseModel::gaussian(Angle::radians(0.0)).is_point_mass());
}

TEST(Variance, EndpointsAndPeriod) {
  const auto p = validate_params(kVx, kVp);
  EXPECT_DOUBLE_EQ(quadrature_variance(p, Angle::degrees(0)), kVx);
  EXPECT_NEAR(quadrature_variance(p, Angle::degrees(90)), kVp, 1e-14);
  EXPECT_NEAR(quadrature_variance(p, Angle::degrees(45)), 0.5 * (kVx + kVp), 1e-14);
  EXPECT_NEAR(quadrature_variance(p, Angle::degrees(30)), quadrature_variance(p, Angle::degrees(210)), 1e-14);
}

TEST(Variance, EffectiveVarianceMatchesTable) {
  const double expected[] = {0.36, 0.42, 0.59, 1.00};
  const double sigmas[] = {0.0, 6.3, 12.6, 22.2};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(effective_variance(gaussian_deg(sigmas[i])), expected[i], 0.005) << sigmas[i];
  }
  EXPECT_NEAR(effective_variance(uniform_model()), 2.82, 0.005);
  EXPECT_DOUBLE_EQ(effective_variance(delta_model()), kVx);
}

TEST(Variance, EffectiveVarianceAgreesWithPhaseIntegral) {
  for (double deg : {3.0, 6.3, 12.6, 22.2, 40.0}) {
    const double s = deg * kPi / 180;
    const double ref = oracle::phase_mean(s, false, [](double p) { return oracle::variance_at(kVx, kVp, p); });
    EXPECT_NEAR(effective_variance(gaussian_deg(deg)), ref, 1e-9) << deg;
  }
}

TEST(PhaseNoise, DensityIntegratesToOneOverAPeriod) {
  for (const auto& noise : {PhaseNoiseModel::gaussian(Angle::degrees(6.3)), PhaseNoiseModel::gaussian(Angle::degrees(60)),
                            PhaseNoiseModel::gaussian(Angle::degrees(300)), PhaseNoiseModel::uniform()}) {
    const double total = oracle::simpson([&](double p) { return phase_density(noise, p); }, -kPi / 2, kPi / 2);
    EXPECT_NEAR(total, 1.0, 1e-8);
  }
  EXPECT_DOUBLE_EQ(phase_density(PhaseNoiseModel::uniform(), 0.3), 1.0 / kPi);
  EXPECT_THROW(phase_density(PhaseNoiseModel::delta(), 0.0), InvalidArgument);
}

TEST(PhaseNoise, DensityIsPiPeriodic) {
  const auto noise = PhaseNoiseModel::gaussian(Angle::degrees(30));
  for (double p : {-1.2, 0.0, 0.4, 1.5}) EXPECT_NEAR(phase_density(noise, p), phase_density(noise, p + kPi), 1e-12);
}

TEST(PhaseNoise, IntervalMassAgreesWithDensityIntegral) {
  const auto noise = PhaseNoiseModel::gaussian(Angle::degrees(22.2));
  for (auto [a, b] : {std::pair{-0.3, 0.3}, {0.1, 0.9}, {1.0, 1.0 + kPi}, {-2.0, -0.5}}) {
    const double ref = oracle::simpson([&](double p) { return phase_density(noise, p); }, a, b);
    EXPECT_NEAR(phase_interval_mass(noise, a, b), ref, 1e-9);
  }
  EXPECT_NEAR(phase_interval_mass(PhaseNoiseModel::uniform(), 0.2, 0.7), 0.5 / kPi, 1e-15);
  EXPECT_EQ(phase_interval_mass(PhaseNoiseModel::delta(), -0.1, 0.1), 1.0);
  EXPECT_EQ(phase_interval_mass(PhaseNoiseModel::delta(), 0.1, 0.2), 0.0);
  EXPECT_EQ(phase_interval_mass(PhaseNoiseModel::delta(), 3.0, 3.2), 1.0);
}

TEST(AnalyticCf, OriginAndVacuum) {
  EXPECT_EQ(analytic_cf(uniform_model(), 0.0), std::complex<double>(1.0, 0.0));
  for (double b : {0.5, 2.0, 5.0}) EXPECT_NEAR(analytic_cf(vacuum_model(), b).real(), 1.0, 1e-12);
}

TEST(AnalyticCf, DeltaClosedForm) {
  for (double b : {0.5, 1.0, 2.0, 3.0}) {
    EXPECT_NEAR(analytic_cf(delta_model(), b).real(), std::exp(b * b * (1 - kVx) / 2), 1e-10 * std::exp(b * b));
  }
  // Along the anti-squeezed direction the function decays.
  const auto b = std::polar(2.0, kPi / 2);
  EXPECT_NEAR(analytic_cf(delta_model(), b).real(), std::exp(4.0 * (1 - kVp) / 2), 1e-12);
}

TEST(AnalyticCf, PhaseAveragedAgreesWithSimpson) {
  for (const auto& [model, sigma, flat] : {std::tuple{gaussian_deg(12.6), 12.6 * kPi / 180, false},
                                           std::tuple{uniform_model(), 0.0, true}}) {
    for (double b : {1.0, 2.5, 4.0}) {
      const double ref = oracle::phase_mean(
          sigma, flat, [&](double p) { return std::exp(b * b / 2 * (1 - oracle::variance_at(kVx, kVp, p))); });
      EXPECT_NEAR(analytic_cf(model, b).real(), ref, 1e-8 * std::abs(ref)) << b;
    }
  }
}

TEST(AnalyticMoments, DeltaClosedForms) {
  EXPECT_NEAR(analytic_central_moment(delta_model(), 2), 0.36, 1e-14);
  EXPECT_NEAR(analytic_central_moment(delta_model(), 4), 3 * 0.36 * 0.36, 1e-14);
  EXPECT_NEAR(analytic_normally_ordered_moment(delta_model(), 2), -0.64, 1e-14);
  EXPECT_NEAR(analytic_normally_ordered_moment(delta_model(), 4), 1.2288, 1e-13);
  EXPECT_EQ(analytic_central_moment(uniform_model(), 5), 0.0);
  EXPECT_EQ(analytic_normally_ordered_moment(uniform_model(), 3), 0.0);
}

TEST(AnalyticMoments, AgreeWithPhaseIntegral) {
  for (int n = 1; n <= 5; ++n) {
    const double s = 22.2 * kPi / 180;
    const double ref = oracle::double_factorial_odd(n) *
                       oracle::phase_mean(s, false, [&](double p) { return std::pow(oracle::variance_at(kVx, kVp, p), n); });
    EXPECT_NEAR(analytic_central_moment(gaussian_deg(22.2), 2 * n), ref, 1e-10 * ref) << n;
  }
}

TEST(AnalyticMoments, MeasurementAngleRotatesTheEllipse) {
  const double at90 = analytic_central_moment(delta_model(), 2, Angle::degrees(90));
  EXPECT_NEAR(at90, kVp, 1e-12);
}

TEST(Wigner, NormalizedAndPositiveAtOrigin) {
  for (const auto& model : {delta_model(), gaussian_deg(22.2), uniform_model()}) {
    const double total = oracle::simpson(
        [&](double x) { return oracle::simpson([&](double p) { return wigner(model, x, p); }, -16, 16, 320); }, -16, 16,
        320);
    EXPECT_NEAR(total, 1.0, 1e-6);
    EXPECT_GT(wigner(model, 0, 0), 0.0);
  }
}

TEST(Wigner, VacuumIsIsotropicGaussian) {
  EXPECT_NEAR(wigner(vacuum_model(), 0.0, 0.0), 1.0 / (2 * kPi), 1e-14);
  EXPECT_NEAR(wigner(vacuum_model(), 1.0, 1.0), std::exp(-1.0) / (2 * kPi), 1e-14);
}

TEST(Hermite, BaseCasesAndSmallValues) {
  EXPECT_EQ(hermite(0, 3.7), 1.0);
  EXPECT_EQ(hermite(1, 2.0), 4.0);
  EXPECT_EQ(hermite(2, 1.0), 2.0);
  EXPECT_EQ(hermite(3, 1.0), -4.0);
  EXPECT_THROW(hermite(65, 1.0), InvalidArgument);
  EXPECT_THROW(hermite(-1, 1.0), InvalidArgument);
}

TEST(Hermite, DerivativeIdentityByFiniteDifferences) {
  for (int k = 1; k <= 10; ++k) {
    for (double x : {-2.3, -0.4, 0.7, 1.9}) {
      const double h = 1e-5;
      const double fd = (hermite(k, x + h) - hermite(k, x - h)) / (2 * h);
      const double exact = 2.0 * k * hermite(k - 1, x);
      EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << "k=" << k << " x=" << x;
    }
  }
}

TEST(Hermite, ScaledFormIsProbabilistsPolynomial) {
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    EXPECT_NEAR(scaled_hermite(2, x), x * x - 1, 1e-13);
    EXPECT_NEAR(scaled_hermite(4, x), x * x * x * x - 6 * x * x + 3, 1e-12);
    for (int k = 0; k <= 18; ++k) {
      const double direct = hermite(k, x / std::sqrt(2.0)) / std::pow(2.0, k / 2.0);
      EXPECT_NEAR(scaled_hermite(k, x), direct, 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(Hermite, OddDoubleFactorial) {
  EXPECT_EQ(odd_double_factorial(0), 1u);
  EXPECT_EQ(odd_double_factorial(1), 1u);
  EXPECT_EQ(odd_double_factorial(5), 945u);
  EXPECT_EQ(odd_double_factorial(10), 654729075u);
}

TEST(Quadrature, ExactOnPolynomialsAndThrowsWhenCapped) {
  EXPECT_NEAR(integrate([](double x) { return x * x * x - x; }, 0.0, 2.0), 2.0, 1e-14);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0), std::sqrt(kPi), 1e-12);
  QuadratureOptions capped;
  capped.max_subdivisions = 2;
  EXPECT_THROW(integrate([](double x) { return std::sin(200 * x) * x; }, 0.0, 10.0, capped), AnalysisError);
}
