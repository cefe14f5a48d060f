#include "pdsq/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdsq/errors.hpp"
#include "pdsq/parallel.hpp"

namespace pdsq {

namespace {
constexpr std::uint64_t kSamplePurpose = 1;
constexpr std::size_t kChunk = 1 << 16;
}  // namespace

Angle sample_phase(const PhaseNoiseModel& noise, RandomStream& stream) {
  switch (noise.kind()) {
    case PhaseNoiseKind::Uniform: {
      const double u = stream.next_uniform();
      stream.next_uniform();
      // u in (0, 1] -> phase in [0, pi)
      return Angle::radians(std::numbers::pi * (1.0 - u));
    }
    case PhaseNoiseKind::Delta:
    case PhaseNoiseKind::Gaussian:
      return Angle::radians(noise.sigma().rad() * stream.next_normal());
  }
  return {};
}

QuadratureDataset sample_quadratures(const StateModel& model, Angle theta, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample_quadratures: n must be at least 1");
  QuadratureDataset data;
  data.samples.resize(n);
  data.angle = theta;
  data.meta.model = model;
  data.meta.seed = seed;

  const std::uint64_t key = derive_key(seed, kSamplePurpose);
  parallel_for(chunk_count(n, kChunk), [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t j = chunk * kChunk; j < end; ++j) {
      RandomStream stream(key, j);
      const Angle phi = sample_phase(model.noise, stream);
      const double variance = quadrature_variance(model.params, theta - phi);
      data.samples[j] = std::sqrt(variance) * stream.next_normal();
    }
  });
  return data;
}

}  // namespace pdsq
