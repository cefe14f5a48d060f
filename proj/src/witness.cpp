#include "pdsq/witness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "pdsq/errors.hpp"

namespace pdsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundSlack = 1e-9;

double wrap_half_period(double phi) {
  double w = std::remainder(phi, kPi);
  if (w == -kPi / 2) w = kPi / 2;
  return w;
}

}  // namespace

int cone_order(const SqueezingParams& params) {
  if (params.v_x() >= 1.0) throw InvalidArgument("state is not squeezed (v_x >= 1); witness inapplicable");
  const double theta_star = std::asin(std::sqrt((1.0 - params.v_x()) / (params.v_p() - params.v_x())));
  // strict inequality pi/(2n) < theta*
  return static_cast<int>(std::floor(kPi / (2.0 * theta_star))) + 1;
}

HeavyInterval heavy_interval(const IntervalMass& mass, int n, int points_per_period) {
  if (n < 1) throw InvalidArgument("heavy_interval: n must be positive");
  const int points = points_per_period > 0 ? points_per_period : 10 * n;
  const double half = kPi / (2.0 * n);
  auto at = [&](double centre) { return mass(centre - half, centre + half); };

  const double step = kPi / points;
  double best_centre = 0.0;
  double best_mass = at(0.0);
  for (int k = 1; k < points; ++k) {
    const double centre = k * step;
    const double m = at(centre);
    if (m > best_mass) {
      best_mass = m;
      best_centre = centre;
    }
  }

  // Golden-section refinement on [best - step, best + step].
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_centre - step;
  double hi = best_centre + step;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = at(c);
  double fd = at(d);
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = at(d);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_mass = at(refined);
  if (refined_mass > best_mass) {
    best_mass = refined_mass;
    best_centre = refined;
  }
  return {Angle::radians(wrap_half_period(best_centre)), best_mass};
}

HeavyInterval heavy_interval(const PhaseNoiseModel& noise, int n) {
  if (n < 1) throw InvalidArgument("heavy_interval: n must be positive");
  if (noise.is_point_mass()) return {Angle{}, 1.0};
  if (noise.kind() == PhaseNoiseKind::Uniform) return {Angle{}, 1.0 / n};
  return heavy_interval([&](double a, double b) { return phase_interval_mass(noise, a, b); }, n);
}

TabulatedPhaseDensity::TabulatedPhaseDensity(std::vector<double> bin_weights)
    : density_(std::move(bin_weights)), width_(0.0) {
  if (density_.empty()) throw InvalidArgument("TabulatedPhaseDensity: no bins");
  double total = 0.0;
  for (double w : density_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("TabulatedPhaseDensity: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("TabulatedPhaseDensity: weights sum to zero");
  width_ = kPi / static_cast<double>(density_.size());
  cdf_.assign(density_.size() + 1, 0.0);
  for (std::size_t k = 0; k < density_.size(); ++k) {
    const double bin_mass = density_[k] / total;
    density_[k] = bin_mass / width_;
    cdf_[k + 1] = cdf_[k] + bin_mass;
  }
}

double TabulatedPhaseDensity::density(double phi) const {
  const double reduced = phi - kPi * std::floor(phi / kPi);
  const auto k = std::min(density_.size() - 1, static_cast<std::size_t>(reduced / width_));
  return density_[k];
}

double TabulatedPhaseDensity::cumulative(double phi) const {
  const double periods = std::floor(phi / kPi);
  const double reduced = phi - kPi * periods;
  const auto k = std::min(density_.size() - 1, static_cast<std::size_t>(reduced / width_));
  const double within = reduced - static_cast<double>(k) * width_;
  return periods * cdf_.back() + cdf_[k] + density_[k] * within;
}

double TabulatedPhaseDensity::mass(double a, double b) const { return cumulative(b) - cumulative(a); }

WitnessCertificate certify_with_order(const StateModel& model, int n) {
  if (n < 1) throw InvalidArgument("certify_with_order: n must be positive");
  WitnessCertificate cert;
  cert.n = n;
  cert.eps = 1.0 - quadrature_variance(model.params, Angle::radians(kPi / (2.0 * n)));
  if (!(cert.eps > 0.0)) throw InvalidArgument("certify_with_order: cone of order n is not inside the squeezed sector");
  const auto heavy = heavy_interval(model.noise, n);
  cert.phi0 = heavy.phi0;
  cert.mass = heavy.mass;
  return cert;
}

WitnessCertificate certify(const StateModel& model) { return certify_with_order(model, cone_order(model.params)); }

BoundVerification verify_bound(const StateModel& model, const WitnessCertificate& cert, std::span<const double> betas) {
  BoundVerification out;
  for (double beta : betas) {
    const double r = std::abs(beta);
    BoundCheck check;
    check.beta = r;
    check.cf = analytic_cf(model, std::polar(r, cert.phi0.rad())).real();
    const double growth = std::exp(0.5 * cert.eps * r * r);
    check.bound_mass = growth * cert.mass;
    check.bound_order = growth / cert.n;
    check.margin = check.cf - check.bound_mass;
    if (check.cf < check.bound_mass - kBoundSlack || check.cf < check.bound_order - kBoundSlack) {
      std::ostringstream msg;
      msg << "witness bound violated at |beta| = " << r << ": Phi = " << check.cf << " < " << check.bound_mass;
      throw AnalysisError(msg.str());
    }
    out.checks.push_back(check);
  }
  return out;
}

}  // namespace pdsq
