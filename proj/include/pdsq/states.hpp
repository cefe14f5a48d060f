#pragma once

#include <complex>
#include <functional>
#include <string>

#include "pdsq/angle.hpp"
#include "pdsq/quadrature.hpp"

namespace pdsq {

/// Quadrature variances of the undisturbed squeezed vacuum, in vacuum units.
/// Canonical orientation: v_x <= v_p, so the x quadrature is the squeezed one.
class SqueezingParams {
 public:
  double v_x() const { return v_x_; }
  double v_p() const { return v_p_; }

  bool operator==(const SqueezingParams&) const = default;

 private:
  friend SqueezingParams validate_params(double v_x, double v_p);
  SqueezingParams(double v_x, double v_p) : v_x_(v_x), v_p_(v_p) {}
  double v_x_;
  double v_p_;
};

/// Checks positivity and the uncertainty bound v_x * v_p >= 1 (with 1e-12 slack) and
/// swaps the pair into canonical orientation. Throws InvalidArgument.
SqueezingParams validate_params(double v_x, double v_p);

enum class PhaseNoiseKind { Delta, Gaussian, Uniform };

/// Distribution of the squeezing-ellipse orientation. All densities are treated as
/// pi-periodic; Uniform is flat over one period.
class PhaseNoiseModel {
 public:
  static PhaseNoiseModel delta() { return PhaseNoiseModel(PhaseNoiseKind::Delta, Angle{}); }
  static PhaseNoiseModel gaussian(Angle sigma);
  static PhaseNoiseModel uniform() { return PhaseNoiseModel(PhaseNoiseKind::Uniform, Angle{}); }

  PhaseNoiseKind kind() const { return kind_; }
  Angle sigma() const { return sigma_; }

  /// Delta, or Gaussian with zero width. Both follow the same code paths.
  bool is_point_mass() const {
    return kind_ == PhaseNoiseKind::Delta || (kind_ == PhaseNoiseKind::Gaussian && sigma_.rad() == 0.0);
  }

  bool operator==(const PhaseNoiseModel&) const = default;

 private:
  PhaseNoiseModel(PhaseNoiseKind kind, Angle sigma) : kind_(kind), sigma_(sigma) {}
  PhaseNoiseKind kind_;
  Angle sigma_;
};

struct StateModel {
  SqueezingParams params;
  PhaseNoiseModel noise;

  bool operator==(const StateModel&) const = default;
};

std::string to_string(PhaseNoiseKind kind);
std::string describe(const StateModel& model);

inline StateModel vacuum_model() { return {validate_params(1.0, 1.0), PhaseNoiseModel::delta()}; }

/// V(theta) = v_x cos^2(theta) + v_p sin^2(theta).
double quadrature_variance(const SqueezingParams& params, Angle theta);

/// Minimum quadrature variance of the phase-diffused state (closed form).
double effective_variance(const StateModel& model);

/// Wrapped (pi-periodic) phase density. Zero-width models have no density; calling
/// this for them throws InvalidArgument.
double phase_density(const PhaseNoiseModel& noise, double phi);

/// Probability mass of the wrapped phase distribution on [a, b], b - a <= pi.
double phase_interval_mass(const PhaseNoiseModel& noise, double a, double b);

/// Expectation of a pi-periodic function over the phase distribution,
/// integral p(phi) f(phi) dphi over one period.
double phase_average(const PhaseNoiseModel& noise, const std::function<double(double)>& f,
                     const QuadratureOptions& opts = {});

/// Characteristic function of the P function of the phase-diffused state at beta.
std::complex<double> analytic_cf(const StateModel& model, std::complex<double> beta,
                                 const QuadratureOptions& opts = {});

/// <(Delta x)^k> at measurement angle theta: (k-1)!! * E_phi[V(theta - phi)^(k/2)], zero for odd k.
double analytic_central_moment(const StateModel& model, int k, Angle theta = {});

/// <:x^k:> at measurement angle theta: (k-1)!! * E_phi[(V(theta - phi) - 1)^(k/2)], zero for odd k.
double analytic_normally_ordered_moment(const StateModel& model, int k, Angle theta = {});

/// Wigner function of the phase-averaged state.
double wigner(const StateModel& model, double x, double p);

}  // namespace pdsq
