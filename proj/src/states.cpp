#include "pdsq/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pdsq/errors.hpp"
#include "pdsq/hermite.hpp"

namespace pdsq {

namespace {

constexpr double kPi = std::numbers::pi;
// Gaussian phase densities are truncated at this many standard deviations before wrapping.
constexpr double kTruncation = 8.0;

double normal_pdf(double x, double sigma) {
  return std::exp(-0.5 * (x / sigma) * (x / sigma)) / (std::sqrt(2.0 * kPi) * sigma);
}

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); }

double wrapped_gaussian(double phi, double sigma) {
  const double reach = kTruncation * sigma;
  const auto k_lo = static_cast<long>(std::ceil((-reach - phi) / kPi));
  const auto k_hi = static_cast<long>(std::floor((reach - phi) / kPi));
  double density = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) density += normal_pdf(phi + static_cast<double>(k) * kPi, sigma);
  return density;
}

}  // namespace

SqueezingParams validate_params(double v_x, double v_p) {
  if (!std::isfinite(v_x) || !std::isfinite(v_p)) throw InvalidArgument("variances must be finite");
  if (v_x <= 0.0 || v_p <= 0.0) throw InvalidArgument("variances must be positive");
  if (v_x * v_p < 1.0 - 1e-12) {
    std::ostringstream msg;
    msg << "variances violate the uncertainty bound: v_x * v_p = " << v_x * v_p << " < 1";
    throw InvalidArgument(msg.str());
  }
  if (v_x > v_p) std::swap(v_x, v_p);
  return SqueezingParams(v_x, v_p);
}

PhaseNoiseModel PhaseNoiseModel::gaussian(Angle sigma) {
  if (!std::isfinite(sigma.rad()) || sigma.rad() < 0.0) {
    throw InvalidArgument("gaussian phase noise needs a finite, nonnegative sigma");
  }
  return PhaseNoiseModel(PhaseNoiseKind::Gaussian, sigma);
}

std::string to_string(PhaseNoiseKind kind) {
  switch (kind) {
    case PhaseNoiseKind::Delta: return "delta";
    case PhaseNoiseKind::Gaussian: return "gaussian";
    case PhaseNoiseKind::Uniform: return "uniform";
  }
  return "unknown";
}

std::string describe(const StateModel& model) {
  std::ostringstream out;
  out << to_string(model.noise.kind()) << "(v_x=" << model.params.v_x() << ", v_p=" << model.params.v_p();
  if (model.noise.kind() == PhaseNoiseKind::Gaussian) out << ", sigma=" << model.noise.sigma().deg() << "deg";
  out << ")";
  return out.str();
}

double quadrature_variance(const SqueezingParams& params, Angle theta) {
  const double c = std::cos(theta.rad());
  const double s = std::sin(theta.rad());
  return params.v_x() * c * c + params.v_p() * s * s;
}

double effective_variance(const StateModel& model) {
  const double v_x = model.params.v_x();
  const double v_p = model.params.v_p();
  switch (model.noise.kind()) {
    case PhaseNoiseKind::Delta: return v_x;
    case PhaseNoiseKind::Uniform: return 0.5 * (v_x + v_p);
    case PhaseNoiseKind::Gaussian: {
      const double sigma = model.noise.sigma().rad();
      return 0.5 * (v_x + v_p) - 0.5 * (v_p - v_x) * std::exp(-2.0 * sigma * sigma);
    }
  }
  return v_x;
}

double phase_density(const PhaseNoiseModel& noise, double phi) {
  if (noise.is_point_mass()) throw InvalidArgument("phase_density: point-mass noise has no density");
  if (noise.kind() == PhaseNoiseKind::Uniform) return 1.0 / kPi;
  return wrapped_gaussian(phi, noise.sigma().rad());
}

double phase_interval_mass(const PhaseNoiseModel& noise, double a, double b) {
  if (b < a) throw InvalidArgument("phase_interval_mass: empty interval");
  if (b - a >= kPi) return 1.0;
  if (noise.kind() == PhaseNoiseKind::Uniform) return (b - a) / kPi;
  if (noise.is_point_mass()) {
    // any multiple of pi inside [a, b]
    return std::ceil(a / kPi) * kPi <= b ? 1.0 : 0.0;
  }
  const double sigma = noise.sigma().rad();
  const double reach = kTruncation * sigma;
  const auto k_lo = static_cast<long>(std::floor((-reach - b) / kPi));
  const auto k_hi = static_cast<long>(std::ceil((reach - a) / kPi));
  double mass = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double lo = std::max(a + static_cast<double>(k) * kPi, -reach);
    const double hi = std::min(b + static_cast<double>(k) * kPi, reach);
    if (hi > lo) mass += normal_cdf(hi, sigma) - normal_cdf(lo, sigma);
  }
  return mass;
}

double phase_average(const PhaseNoiseModel& noise, const std::function<double(double)>& f,
                     const QuadratureOptions& opts) {
  if (noise.is_point_mass()) return f(0.0);

  if (noise.kind() == PhaseNoiseKind::Uniform) {
    const std::vector<double> breaks = {-kPi / 2, -kPi / 4, 0.0, kPi / 4, kPi / 2};
    return integrate(f, std::span<const double>(breaks), opts) / kPi;
  }

  const double sigma = noise.sigma().rad();
  const double lo = std::max(-kPi / 2, -kTruncation * sigma);
  const double hi = std::min(kPi / 2, kTruncation * sigma);
  std::vector<double> breaks = {lo, hi, 0.0};
  for (double m : {1.0, 2.0, 4.0}) {
    if (m * sigma < hi) {
      breaks.push_back(m * sigma);
      breaks.push_back(-m * sigma);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  auto weighted = [&](double phi) { return wrapped_gaussian(phi, sigma) * f(phi); };
  return integrate(weighted, std::span<const double>(breaks), opts);
}

std::complex<double> analytic_cf(const StateModel& model, std::complex<double> beta,
                                 const QuadratureOptions& opts) {
  const double r2 = std::norm(beta);
  if (r2 == 0.0) return {1.0, 0.0};
  const double arg = std::arg(beta);
  auto integrand = [&](double phi) {
    return std::exp(0.5 * r2 * (1.0 - quadrature_variance(model.params, Angle::radians(arg - phi))));
  };
  return {phase_average(model.noise, integrand, opts), 0.0};
}

namespace {

double gaussian_moment(const StateModel& model, int k, Angle theta, double offset) {
  if (k < 0) throw InvalidArgument("moment order must be nonnegative");
  if (k % 2 == 1) return 0.0;
  if (k == 0) return 1.0;
  const int n = k / 2;
  const auto prefactor = static_cast<double>(odd_double_factorial(n));
  auto power = [&](double phi) {
    return std::pow(quadrature_variance(model.params, theta - Angle::radians(phi)) - offset, n);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  // (V - 1)^n changes sign across the phase range, so guard the relative target.
  opts.abs_tol = offset != 0.0 ? 1e-14 : 0.0;
  return prefactor * phase_average(model.noise, power, opts);
}

}  // namespace

double analytic_central_moment(const StateModel& model, int k, Angle theta) {
  return gaussian_moment(model, k, theta, 0.0);
}

double analytic_normally_ordered_moment(const StateModel& model, int k, Angle theta) {
  return gaussian_moment(model, k, theta, 1.0);
}

double wigner(const StateModel& model, double x, double p) {
  const double v_x = model.params.v_x();
  const double v_p = model.params.v_p();
  const double norm = 1.0 / (2.0 * kPi * std::sqrt(v_x * v_p));
  auto rotated = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double xr = x * c + p * s;
    const double pr = -x * s + p * c;
    return norm * std::exp(-xr * xr / (2.0 * v_x) - pr * pr / (2.0 * v_p));
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-300;
  return phase_average(model.noise, rotated, opts);
}

}  // namespace pdsq
