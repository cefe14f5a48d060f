#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdsq/angle.hpp"
#include "pdsq/states.hpp"

namespace pdsq {

/// Constructive certificate that the characteristic function of a phase-diffused
/// squeezed state is unbounded: |Phi(|beta| e^{i phi0})| >= mass e^{eps |beta|^2 / 2}
/// with mass >= 1/n.
struct WitnessCertificate {
  int n = 0;       // cone subdivision order
  Angle phi0;      // centre of the heaviest interval of width pi/n
  double eps = 0;  // 1 - V(pi / 2n)
  double mass = 0; // phase mass on [phi0 - pi/2n, phi0 + pi/2n]
};

/// Smallest n with pi/(2n) < theta*, where V(theta*) = 1. Throws InvalidArgument when
/// v_x >= 1 (no squeezed cone exists).
int cone_order(const SqueezingParams& params);

struct HeavyInterval {
  Angle phi0;
  double mass = 0;
};

/// Probability mass of a pi-periodic phase distribution on [a, b].
using IntervalMass = std::function<double(double, double)>;

/// Centre of a width-pi/n interval carrying the most mass. Scans
/// `points_per_period` centres (default 10 n) over one period and refines the best
/// with a golden-section search. The scan alone already guarantees mass >= 1/n.
HeavyInterval heavy_interval(const IntervalMass& mass, int n, int points_per_period = 0);
HeavyInterval heavy_interval(const PhaseNoiseModel& noise, int n);

/// Piecewise-constant pi-periodic density over equal bins of [0, pi), normalized on construction.
class TabulatedPhaseDensity {
 public:
  explicit TabulatedPhaseDensity(std::vector<double> bin_weights);

  double density(double phi) const;
  double mass(double a, double b) const;
  IntervalMass interval_mass() const {
    return [this](double a, double b) { return mass(a, b); };
  }

 private:
  double cumulative(double phi) const;
  std::vector<double> density_;
  std::vector<double> cdf_;  // cdf_[k] = mass of [0, k * width)
  double width_;
};

/// Certificate for the smallest valid cone order.
WitnessCertificate certify(const StateModel& model);
/// Certificate for an explicit order n; n must satisfy the cone condition.
WitnessCertificate certify_with_order(const StateModel& model, int n);

struct BoundCheck {
  double beta = 0;
  double cf = 0;          // Phi(|beta| e^{i phi0}) by quadrature
  double bound_mass = 0;  // mass * e^{eps beta^2 / 2}
  double bound_order = 0; // e^{eps beta^2 / 2} / n
  double margin = 0;      // cf - bound_mass
};

struct BoundVerification {
  std::vector<BoundCheck> checks;
  bool holds = true;
};

/// Evaluates both lower bounds at each |beta| against the integrated characteristic
/// function. Throws AnalysisError if either bound is violated by more than 1e-9.
BoundVerification verify_bound(const StateModel& model, const WitnessCertificate& cert, std::span<const double> betas);

}  // namespace pdsq
