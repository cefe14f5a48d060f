#include "pdsq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "pdsq/errors.hpp"

namespace pdsq {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string noise_name(PhaseNoiseKind kind) { return to_string(kind); }

PhaseNoiseKind parse_noise(std::string_view name) {
  if (name == "delta") return PhaseNoiseKind::Delta;
  if (name == "gaussian") return PhaseNoiseKind::Gaussian;
  if (name == "uniform") return PhaseNoiseKind::Uniform;
  throw InvalidArgument("unknown noise kind '" + std::string(name) + "' (expected delta, gaussian or uniform)");
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string AngleSpec::str() const { return (unit == AngleUnit::Degrees ? "deg:" : "rad:") + shortest(value); }

AngleSpec parse_angle(std::string_view text) {
  AngleSpec spec;
  if (text.starts_with("deg:")) {
    spec.unit = AngleUnit::Degrees;
  } else if (text.starts_with("rad:")) {
    spec.unit = AngleUnit::Radians;
  } else {
    throw InvalidArgument("angle '" + std::string(text) + "' needs a unit prefix: deg:<value> or rad:<value>");
  }
  const std::string_view number = text.substr(4);
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), spec.value);
  if (ec != std::errc() || ptr != number.data() + number.size() || !std::isfinite(spec.value)) {
    throw InvalidArgument("angle '" + std::string(text) + "' has no valid finite number");
  }
  return spec;
}

StateModel ModelSpec::model() const {
  const auto params = validate_params(v_x, v_p);
  switch (noise) {
    case PhaseNoiseKind::Delta: return {params, PhaseNoiseModel::delta()};
    case PhaseNoiseKind::Uniform: return {params, PhaseNoiseModel::uniform()};
    case PhaseNoiseKind::Gaussian:
      if (!sigma) throw InvalidArgument("model '" + label + "': gaussian noise needs sigma");
      return {params, PhaseNoiseModel::gaussian(sigma->angle())};
  }
  throw InvalidArgument("model '" + label + "': unknown noise kind");
}

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::Cf: return "cf";
    case Analysis::Moments: return "moments";
    case Analysis::Matrices: return "matrices";
    case Analysis::Witness: return "witness";
  }
  return "unknown";
}

Analysis parse_analysis(std::string_view name) {
  if (name == "cf") return Analysis::Cf;
  if (name == "moments") return Analysis::Moments;
  if (name == "matrices") return Analysis::Matrices;
  if (name == "witness") return Analysis::Witness;
  throw InvalidArgument("unknown analysis '" + std::string(name) + "'");
}

bool RunConfig::has(Analysis a) const { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); }

void validate(RunConfig& config) {
  std::sort(config.analyses.begin(), config.analyses.end());
  config.analyses.erase(std::unique(config.analyses.begin(), config.analyses.end()), config.analyses.end());
  if (config.n == 0) throw InvalidArgument("n must be at least 1");
  if (config.grid.points == 0 || !(config.grid.min >= 0.0) || !(config.grid.max >= config.grid.min) ||
      (config.grid.points > 1 && !(config.grid.max > config.grid.min))) {
    throw InvalidArgument("cf grid must satisfy 0 <= min < max with at least one point");
  }
  if (config.hong_mandel_n_max < 1 || config.hong_mandel_n_max > 10) {
    throw InvalidArgument("hong_mandel_n_max must lie in [1, 10]");
  }
  for (int l : config.matrix_dims) {
    if (l < 1 || l > 11) throw InvalidArgument("matrix dimensions must lie in [1, 11]");
  }
  if (config.bootstrap_replicates < 2 &&
      (config.has(Analysis::Moments) || config.has(Analysis::Matrices))) {
    throw InvalidArgument("bootstrap_replicates must be at least 2");
  }
  if (!(config.significance_threshold > 0.0)) throw InvalidArgument("significance_threshold must be positive");
  for (const auto& f : config.formats) {
    if (f != "json" && f != "csv") throw InvalidArgument("unknown output format '" + f + "'");
  }
  std::set<std::string> labels;
  for (const auto& m : config.models) {
    if (m.label.empty()) throw InvalidArgument("every model needs a label");
    if (!labels.insert(m.label).second) throw InvalidArgument("duplicate model label '" + m.label + "'");
    (void)m.model();
  }
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : config.models) {
    nlohmann::json mj{{"label", m.label}, {"noise", noise_name(m.noise)}, {"v_x", m.v_x}, {"v_p", m.v_p}};
    if (m.sigma) mj["sigma"] = m.sigma->str();
    models.push_back(mj);
  }
  j["models"] = models;
  j["theta"] = config.theta.str();
  j["n"] = config.n;
  j["seed"] = config.seed;
  nlohmann::json analyses = nlohmann::json::array();
  for (auto a : config.analyses) analyses.push_back(to_string(a));
  j["analyses"] = analyses;
  j["cf_grid"] = {{"min", config.grid.min}, {"max", config.grid.max}, {"points", config.grid.points}};
  j["hong_mandel_n_max"] = config.hong_mandel_n_max;
  j["matrix_dims"] = config.matrix_dims;
  j["bootstrap_replicates"] = config.bootstrap_replicates;
  j["significance_threshold"] = config.significance_threshold;
  j["witness_betas"] = config.witness_betas;
  j["output"] = {{"dir", config.output_dir}, {"formats", config.formats}};
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig config;
  try {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    reject_unknown(j,
                   {"models", "theta", "n", "seed", "analyses", "cf_grid", "hong_mandel_n_max", "matrix_dims",
                    "bootstrap_replicates", "significance_threshold", "witness_betas", "output"},
                   "config");
    if (j.contains("models")) {
      for (const auto& mj : j.at("models")) {
        reject_unknown(mj, {"label", "noise", "v_x", "v_p", "sigma"}, "model");
        ModelSpec m;
        m.label = mj.at("label").get<std::string>();
        m.noise = parse_noise(mj.at("noise").get<std::string>());
        m.v_x = mj.at("v_x").get<double>();
        m.v_p = mj.at("v_p").get<double>();
        if (mj.contains("sigma")) m.sigma = parse_angle(mj.at("sigma").get<std::string>());
        config.models.push_back(m);
      }
    }
    if (j.contains("theta")) config.theta = parse_angle(j.at("theta").get<std::string>());
    read_if(j, "n", config.n);
    read_if(j, "seed", config.seed);
    if (j.contains("analyses")) {
      config.analyses.clear();
      for (const auto& a : j.at("analyses")) config.analyses.push_back(parse_analysis(a.get<std::string>()));
    }
    if (j.contains("cf_grid")) {
      const auto& g = j.at("cf_grid");
      reject_unknown(g, {"min", "max", "points"}, "cf_grid");
      read_if(g, "min", config.grid.min);
      read_if(g, "max", config.grid.max);
      read_if(g, "points", config.grid.points);
    }
    read_if(j, "hong_mandel_n_max", config.hong_mandel_n_max);
    read_if(j, "matrix_dims", config.matrix_dims);
    read_if(j, "bootstrap_replicates", config.bootstrap_replicates);
    read_if(j, "significance_threshold", config.significance_threshold);
    read_if(j, "witness_betas", config.witness_betas);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      reject_unknown(o, {"dir", "formats"}, "output");
      read_if(o, "dir", config.output_dir);
      read_if(o, "formats", config.formats);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  validate(config);
  return config;
}

RunConfig catalog_config() {
  RunConfig config;
  auto gaussian = [](std::string label, double deg) {
    return ModelSpec{std::move(label), PhaseNoiseKind::Gaussian, 0.36, 5.28, AngleSpec{AngleUnit::Degrees, deg}};
  };
  config.models = {gaussian("sigma=0.0deg", 0.0), gaussian("sigma=6.3deg", 6.3), gaussian("sigma=12.6deg", 12.6),
                   gaussian("sigma=22.2deg", 22.2),
                   ModelSpec{"sigma=inf", PhaseNoiseKind::Uniform, 0.36, 5.28, std::nullopt}};
  config.analyses = {Analysis::Cf, Analysis::Moments, Analysis::Matrices, Analysis::Witness};
  return config;
}

}  // namespace pdsq
