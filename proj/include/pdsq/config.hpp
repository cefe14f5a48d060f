#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdsq/angle.hpp"
#include "pdsq/states.hpp"

namespace pdsq {

enum class AngleUnit { Degrees, Radians };

/// An angle as the user wrote it ("deg:6.3", "rad:0.11"). Keeping the unit and the
/// literal value lets configs round-trip exactly.
struct AngleSpec {
  AngleUnit unit = AngleUnit::Radians;
  double value = 0.0;

  Angle angle() const { return unit == AngleUnit::Degrees ? Angle::degrees(value) : Angle::radians(value); }
  std::string str() const;
  bool operator==(const AngleSpec&) const = default;
};

/// Parses "deg:<x>" or "rad:<x>". Bare numbers are rejected. Throws InvalidArgument.
AngleSpec parse_angle(std::string_view text);

struct ModelSpec {
  std::string label;
  PhaseNoiseKind noise = PhaseNoiseKind::Gaussian;
  double v_x = 0.36;
  double v_p = 5.28;
  std::optional<AngleSpec> sigma;  // Gaussian only

  StateModel model() const;
  bool operator==(const ModelSpec&) const = default;
};

enum class Analysis { Cf, Moments, Matrices, Witness };
std::string to_string(Analysis a);
Analysis parse_analysis(std::string_view name);

struct GridSpec {
  double min = 0.0;
  double max = 4.0;
  std::size_t points = 200;
  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  std::vector<ModelSpec> models;
  AngleSpec theta{AngleUnit::Radians, 0.0};
  std::size_t n = 10'000'000;
  std::uint64_t seed = 1;
  std::vector<Analysis> analyses;  // kept sorted and unique
  GridSpec grid;
  int hong_mandel_n_max = 5;
  std::vector<int> matrix_dims = {2, 4, 6, 8, 10};
  std::size_t bootstrap_replicates = 100;
  double significance_threshold = 10.0;
  std::vector<double> witness_betas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  std::string output_dir;
  std::vector<std::string> formats = {"json", "csv"};

  bool has(Analysis a) const;
  bool operator==(const RunConfig&) const = default;
};

/// Checks ranges and normalizes the analysis list. Throws InvalidArgument.
void validate(RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
/// Strict parse: unknown keys are rejected, missing keys take defaults.
RunConfig config_from_json(const nlohmann::json& j);

/// The five states of the phase-noise catalog (v_x = 0.36, v_p = 5.28;
/// sigma = 0, 6.3, 12.6, 22.2 degrees and flat), all analyses enabled.
RunConfig catalog_config();

}  // namespace pdsq
