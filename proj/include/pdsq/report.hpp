#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdsq/cf.hpp"
#include "pdsq/config.hpp"
#include "pdsq/matrices.hpp"
#include "pdsq/moments.hpp"
#include "pdsq/sampler.hpp"
#include "pdsq/witness.hpp"

namespace pdsq {

inline constexpr const char* kVersion = "0.1.0";

struct CfBlock {
  CfCurve curve;
  SignificanceReport significance;
  double threshold = 0.0;
};

struct MomentsBlock {
  SqueezingDegrees degrees;
  std::vector<double> central;
  std::vector<double> normal;
  std::vector<double> normal_se;
  double mean = 0.0;
};

struct MatricesBlock {
  std::vector<MinEigResult> eigen;
  std::vector<double> lambda_dense;  // dense-solver value of each point estimate
  std::string resampling = "empirical-with-replacement";
};

struct WitnessBlock {
  std::optional<WitnessCertificate> certificate;
  std::optional<BoundVerification> verification;
  std::optional<WitnessCertificate> next_order;  // certificate for n + 1, for comparison
  std::optional<BoundVerification> next_order_verification;
  std::string note;  // why no certificate exists, if it does not
};

struct StateReport {
  std::string label;
  std::optional<StateModel> model;
  std::optional<double> v_eff;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double theta_rad = 0.0;
  std::optional<CfBlock> cf;
  std::optional<MomentsBlock> moments;
  std::optional<MatricesBlock> matrices;
  std::optional<WitnessBlock> witness;
};

struct Report {
  RunConfig config;
  std::string version = kVersion;
  std::string created;
  std::map<std::string, double> timings;  // seconds per stage
  std::vector<StateReport> states;
};

/// Runs the enabled analyses on one dataset. `seed` drives the bootstrap substreams.
StateReport analyze_dataset(const QuadratureDataset& data, const RunConfig& config, const std::string& label,
                            std::uint64_t seed, std::map<std::string, double>* timings = nullptr);

/// Simulates each configured model (dataset seed = config.seed + index) and analyzes it.
/// With no analyses enabled nothing is simulated and the report only echoes the config.
Report run(const RunConfig& config);

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// Drops wall-clock fields so two reports can be compared for determinism.
nlohmann::json strip_volatile(nlohmann::json report_json);

/// "value(1±r%)" with r = 100 sigma / |value|.
std::string format_uncertain(double value, double sigma);

/// Writes report.json and/or table1.csv, table2.csv, table3.csv, cf_curves.csv into dir.
/// CSV tables are written only when the report holds the corresponding results.
/// Returns the paths written. Throws IoError when the directory is not writable.
std::vector<std::filesystem::path> emit(const Report& report, const std::vector<std::string>& formats,
                                        const std::filesystem::path& dir);

}  // namespace pdsq
