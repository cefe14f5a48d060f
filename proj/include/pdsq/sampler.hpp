#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdsq/angle.hpp"
#include "pdsq/rng.hpp"
#include "pdsq/states.hpp"

namespace pdsq {

struct DatasetMeta {
  std::optional<StateModel> model;  // absent for imported data
  std::uint64_t seed = 0;
  std::optional<std::string> created;  // ISO-8601, only when explicitly stamped
};

/// Vacuum-normalized quadrature samples taken at one measurement angle.
struct QuadratureDataset {
  std::vector<double> samples;
  Angle angle;
  DatasetMeta meta;

  std::size_t size() const { return samples.size(); }
};

/// One phase draw. Consumes exactly two uniforms from the stream for every model so
/// the per-sample layout does not depend on the noise kind.
Angle sample_phase(const PhaseNoiseModel& noise, RandomStream& stream);

/// Draws n samples x_j ~ Normal(0, V(theta - phi_j)) with phi_j ~ p(phi). Sample j
/// reads substream j of the seed's key (phase first, then the normal variate), so the
/// result is bit-identical for any thread count. Throws InvalidArgument for n = 0.
QuadratureDataset sample_quadratures(const StateModel& model, Angle theta, std::size_t n, std::uint64_t seed);

}  // namespace pdsq
