#include "pdsq/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Core>

#include "pdsq/dataset_io.hpp"
#include "pdsq/errors.hpp"

namespace pdsq {

namespace {

using json = nlohmann::json;

class StageTimer {
 public:
  StageTimer(std::map<std::string, double>* sink, std::string key) : sink_(sink), key_(std::move(key)) {}
  ~StageTimer() {
    if (sink_) (*sink_)[key_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>* sink_;
  std::string key_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// --- JSON conversion of result blocks -------------------------------------------------

json certificate_json(const WitnessCertificate& c) {
  return {{"n", c.n}, {"phi0_rad", c.phi0.rad()}, {"eps", c.eps}, {"mass", c.mass}};
}

WitnessCertificate certificate_from(const json& j) {
  WitnessCertificate c;
  c.n = j.at("n").get<int>();
  c.phi0 = Angle::radians(j.at("phi0_rad").get<double>());
  c.eps = j.at("eps").get<double>();
  c.mass = j.at("mass").get<double>();
  return c;
}

json verification_json(const BoundVerification& v) {
  json checks = json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"beta", c.beta},
                      {"cf", c.cf},
                      {"bound_mass", c.bound_mass},
                      {"bound_order", c.bound_order},
                      {"margin", c.margin}});
  }
  return {{"holds", v.holds}, {"checks", checks}};
}

BoundVerification verification_from(const json& j) {
  BoundVerification v;
  v.holds = j.at("holds").get<bool>();
  for (const auto& c : j.at("checks")) {
    v.checks.push_back({c.at("beta").get<double>(), c.at("cf").get<double>(), c.at("bound_mass").get<double>(),
                        c.at("bound_order").get<double>(), c.at("margin").get<double>()});
  }
  return v;
}

json state_json(const StateReport& s) {
  json j;
  j["label"] = s.label;
  j["model"] = s.model ? model_to_json(*s.model) : json(nullptr);
  j["v_eff"] = s.v_eff ? json(*s.v_eff) : json(nullptr);
  j["dataset"] = {{"n", s.n}, {"seed", s.seed}, {"theta_rad", s.theta_rad}};
  if (s.cf) {
    const auto& c = s.cf->curve;
    std::vector<double> re, im, abs;
    for (const auto& v : c.values) {
      re.push_back(v.real());
      im.push_back(v.imag());
      abs.push_back(std::abs(v));
    }
    j["cf"] = {{"curve", {{"beta", c.betas}, {"re", re}, {"im", im}, {"abs", abs}, {"sigma", c.sigmas}, {"n", c.n}}},
               {"significance",
                {{"beta_star", s.cf->significance.beta_star},
                 {"s_star", s.cf->significance.s_star},
                 {"detected", s.cf->significance.detected},
                 {"threshold", s.cf->threshold}}}};
  }
  if (s.moments) {
    const auto& m = *s.moments;
    j["moments"] = {{"hong_mandel",
                     {{"orders", m.degrees.orders},
                      {"q", m.degrees.q},
                      {"sigma", m.degrees.sigmas},
                      {"replicates", m.degrees.replicates}}},
                    {"central", m.central},
                    {"normally_ordered", m.normal},
                    {"normally_ordered_se", m.normal_se},
                    {"mean", m.mean}};
  }
  if (s.matrices) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.matrices->eigen.size(); ++i) {
      const auto& e = s.matrices->eigen[i];
      rows.push_back({{"l", e.l},
                      {"lambda_min", e.lambda_min},
                      {"sigma", e.sigma},
                      {"replicates", e.replicates},
                      {"lambda_dense", s.matrices->lambda_dense[i]}});
    }
    j["matrices"] = {{"min_eigenvalues", rows}, {"resampling", s.matrices->resampling}};
  }
  if (s.witness) {
    const auto& w = *s.witness;
    json wj;
    wj["certificate"] = w.certificate ? certificate_json(*w.certificate) : json(nullptr);
    wj["verification"] = w.verification ? verification_json(*w.verification) : json(nullptr);
    wj["next_order"] = w.next_order ? certificate_json(*w.next_order) : json(nullptr);
    wj["next_order_verification"] = w.next_order_verification ? verification_json(*w.next_order_verification)
                                                               : json(nullptr);
    wj["note"] = w.note;
    j["witness"] = wj;
  }
  return j;
}

StateReport state_from(const json& j) {
  StateReport s;
  s.label = j.at("label").get<std::string>();
  if (!j.at("model").is_null()) s.model = model_from_json(j.at("model"));
  if (!j.at("v_eff").is_null()) s.v_eff = j.at("v_eff").get<double>();
  s.n = j.at("dataset").at("n").get<std::size_t>();
  s.seed = j.at("dataset").at("seed").get<std::uint64_t>();
  s.theta_rad = j.at("dataset").at("theta_rad").get<double>();
  if (j.contains("cf")) {
    const auto& c = j.at("cf");
    CfBlock block;
    block.curve.betas = c.at("curve").at("beta").get<std::vector<double>>();
    const auto re = c.at("curve").at("re").get<std::vector<double>>();
    const auto im = c.at("curve").at("im").get<std::vector<double>>();
    for (std::size_t k = 0; k < re.size(); ++k) block.curve.values.emplace_back(re[k], im[k]);
    block.curve.sigmas = c.at("curve").at("sigma").get<std::vector<double>>();
    block.curve.n = c.at("curve").at("n").get<std::size_t>();
    const auto& sig = c.at("significance");
    block.significance = {sig.at("beta_star").get<double>(), sig.at("s_star").get<double>(),
                          sig.at("detected").get<bool>()};
    block.threshold = sig.at("threshold").get<double>();
    s.cf = block;
  }
  if (j.contains("moments")) {
    const auto& m = j.at("moments");
    MomentsBlock block;
    block.degrees.orders = m.at("hong_mandel").at("orders").get<std::vector<int>>();
    block.degrees.q = m.at("hong_mandel").at("q").get<std::vector<double>>();
    block.degrees.sigmas = m.at("hong_mandel").at("sigma").get<std::vector<double>>();
    block.degrees.replicates = m.at("hong_mandel").at("replicates").get<std::size_t>();
    block.central = m.at("central").get<std::vector<double>>();
    block.normal = m.at("normally_ordered").get<std::vector<double>>();
    block.normal_se = m.at("normally_ordered_se").get<std::vector<double>>();
    block.mean = m.at("mean").get<double>();
    s.moments = block;
  }
  if (j.contains("matrices")) {
    MatricesBlock block;
    block.resampling = j.at("matrices").at("resampling").get<std::string>();
    for (const auto& row : j.at("matrices").at("min_eigenvalues")) {
      block.eigen.push_back({row.at("lambda_min").get<double>(), row.at("sigma").get<double>(), row.at("l").get<int>(),
                             row.at("replicates").get<std::size_t>()});
      block.lambda_dense.push_back(row.at("lambda_dense").get<double>());
    }
    s.matrices = block;
  }
  if (j.contains("witness")) {
    const auto& w = j.at("witness");
    WitnessBlock block;
    if (!w.at("certificate").is_null()) block.certificate = certificate_from(w.at("certificate"));
    if (!w.at("verification").is_null()) block.verification = verification_from(w.at("verification"));
    if (!w.at("next_order").is_null()) block.next_order = certificate_from(w.at("next_order"));
    if (!w.at("next_order_verification").is_null()) {
      block.next_order_verification = verification_from(w.at("next_order_verification"));
    }
    block.note = w.at("note").get<std::string>();
    s.witness = block;
  }
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string sigma_label(const StateReport& s) {
  if (!s.model) return "";
  switch (s.model->noise.kind()) {
    case PhaseNoiseKind::Delta: return "0";
    case PhaseNoiseKind::Uniform: return "inf";
    case PhaseNoiseKind::Gaussian: return num(s.model->noise.sigma().deg());
  }
  return "";
}

}  // namespace

StateReport analyze_dataset(const QuadratureDataset& data, const RunConfig& config, const std::string& label,
                            std::uint64_t seed, std::map<std::string, double>* timings) {
  StateReport out;
  out.label = label;
  out.model = data.meta.model;
  if (out.model) out.v_eff = effective_variance(*out.model);
  out.n = data.size();
  out.seed = data.meta.seed;
  out.theta_rad = data.angle.rad();

  auto stage = [&](const std::string& name) { return StageTimer(timings, label + "/" + name); };

  if (config.has(Analysis::Cf)) {
    const auto timer = stage("cf");
    CfBlock block;
    block.curve = cf_scan(data, uniform_grid(config.grid.min, config.grid.max, config.grid.points));
    block.threshold = config.significance_threshold;
    block.significance = significance(block.curve, block.threshold);
    out.cf = std::move(block);
  }

  const bool moments = config.has(Analysis::Moments);
  const bool matrices = config.has(Analysis::Matrices) && !config.matrix_dims.empty();
  if (moments || matrices) {
    const int central_order = moments ? 2 * config.hong_mandel_n_max : 0;
    int normal_order = 0;
    if (matrices) normal_order = 2 * *std::max_element(config.matrix_dims.begin(), config.matrix_dims.end()) - 2;
    const int point_order = std::max({2, central_order, normal_order});

    MomentSet point;
    std::vector<ReplicateMoments> boot;
    {
      const auto timer = stage("moments-point");
      point = moment_set(data, point_order);
    }
    {
      const auto timer = stage("bootstrap");
      boot = bootstrap_moments(data, central_order, normal_order, config.bootstrap_replicates, seed);
    }
    if (moments) {
      MomentsBlock block;
      block.degrees = squeezing_degrees(point.central, boot, config.hong_mandel_n_max);
      block.central = point.central;
      block.normal = point.normal;
      block.normal_se = point.normal_se;
      block.mean = point.mean;
      out.moments = std::move(block);
    }
    if (matrices) {
      const auto timer = stage("matrices");
      MatricesBlock block;
      block.eigen = min_eig_with_errors(point.normal, boot, config.matrix_dims);
      for (int l : config.matrix_dims) {
        block.lambda_dense.push_back(min_eig_dense(build_matrix<double>(point.normal, l).entries));
      }
      out.matrices = std::move(block);
    }
  }

  if (config.has(Analysis::Witness)) {
    const auto timer = stage("witness");
    WitnessBlock block;
    if (!out.model) {
      block.note = "no state model attached to the dataset";
    } else if (out.model->params.v_x() >= 1.0) {
      block.note = "state is not squeezed (v_x >= 1); witness inapplicable";
    } else {
      block.certificate = certify(*out.model);
      block.verification = verify_bound(*out.model, *block.certificate, config.witness_betas);
      block.next_order = certify_with_order(*out.model, block.certificate->n + 1);
      block.next_order_verification = verify_bound(*out.model, *block.next_order, config.witness_betas);
    }
    out.witness = std::move(block);
  }
  return out;
}

Report run(const RunConfig& input) {
  RunConfig config = input;
  validate(config);
  Report report;
  report.config = config;
  report.created = now_iso8601();
  if (config.analyses.empty()) return report;

  for (std::size_t i = 0; i < config.models.size(); ++i) {
    const auto& spec = config.models[i];
    const std::uint64_t seed = config.seed + i;
    QuadratureDataset data;
    try {
      const StageTimer timer(&report.timings, spec.label + "/simulate");
      data = sample_quadratures(spec.model(), config.theta.angle(), config.n, seed);
    } catch (const AnalysisError& e) {
      throw AnalysisError(spec.label + ": simulate: " + e.what());
    }
    try {
      report.states.push_back(analyze_dataset(data, config, spec.label, seed, &report.timings));
    } catch (const AnalysisError& e) {
      throw AnalysisError(spec.label + ": analysis: " + e.what());
    }
  }
  return report;
}

json to_json(const Report& report) {
  json j;
  j["tool"] = {{"name", "pdsq"},
               {"version", report.version},
               {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                             std::to_string(EIGEN_MINOR_VERSION)}};
  j["created"] = report.created;
  j["config"] = to_json(report.config);
  j["timings"] = report.timings;
  json states = json::array();
  for (const auto& s : report.states) states.push_back(state_json(s));
  j["states"] = states;
  return j;
}

Report report_from_json(const json& j) {
  Report report;
  try {
    report.version = j.at("tool").at("version").get<std::string>();
    report.created = j.at("created").get<std::string>();
    report.config = config_from_json(j.at("config"));
    report.timings = j.at("timings").get<std::map<std::string, double>>();
    for (const auto& s : j.at("states")) report.states.push_back(state_from(s));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
  return report;
}

json strip_volatile(json report_json) {
  report_json.erase("created");
  report_json.erase("timings");
  return report_json;
}

std::string format_uncertain(double value, double sigma) {
  std::ostringstream v;
  v << std::setprecision(4) << value;
  if (value == 0.0) return v.str() + "(1±inf%)";
  const double rel = 100.0 * sigma / std::abs(value);
  std::ostringstream r;
  r << std::setprecision(2) << rel;
  return v.str() + "(1±" + r.str() + "%)";
}

std::vector<std::filesystem::path> emit(const Report& report, const std::vector<std::string>& formats,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto want = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

  if (want("json")) {
    written.push_back(dir / "report.json");
    write_text(written.back(), to_json(report).dump(2) + "\n");
  }
  if (!want("csv") || report.states.empty()) return written;

  {
    std::ostringstream t1;
    t1 << "model,noise,sigma_deg,v_eff\n";
    for (const auto& s : report.states) {
      t1 << csv_field(s.label) << "," << (s.model ? to_string(s.model->noise.kind()) : "") << "," << sigma_label(s)
         << "," << (s.v_eff ? num(*s.v_eff) : "") << "\n";
    }
    written.push_back(dir / "table1.csv");
    write_text(written.back(), t1.str());
  }

  const auto with_moments = std::find_if(report.states.begin(), report.states.end(),
                                         [](const StateReport& s) { return s.moments.has_value(); });
  if (with_moments != report.states.end()) {
    std::ostringstream t2;
    t2 << "model";
    for (int order : with_moments->moments->degrees.orders) {
      t2 << ",q" << order << ",q" << order << "_sigma,q" << order << "_text";
    }
    t2 << "\n";
    for (const auto& s : report.states) {
      if (!s.moments) continue;
      t2 << csv_field(s.label);
      const auto& d = s.moments->degrees;
      for (std::size_t k = 0; k < d.q.size(); ++k) {
        t2 << "," << num(d.q[k]) << "," << num(d.sigmas[k]) << "," << format_uncertain(d.q[k], d.sigmas[k]);
      }
      t2 << "\n";
    }
    written.push_back(dir / "table2.csv");
    write_text(written.back(), t2.str());
  }

  const auto with_matrices = std::find_if(report.states.begin(), report.states.end(),
                                          [](const StateReport& s) { return s.matrices.has_value(); });
  if (with_matrices != report.states.end()) {
    std::ostringstream t3;
    t3 << "model";
    for (const auto& e : with_matrices->matrices->eigen) {
      t3 << ",l" << e.l << "_lambda,l" << e.l << "_sigma,l" << e.l << "_text";
    }
    t3 << "\n";
    for (const auto& s : report.states) {
      if (!s.matrices) continue;
      t3 << csv_field(s.label);
      for (const auto& e : s.matrices->eigen) {
        t3 << "," << num(e.lambda_min) << "," << num(e.sigma) << "," << format_uncertain(e.lambda_min, e.sigma);
      }
      t3 << "\n";
    }
    written.push_back(dir / "table3.csv");
    write_text(written.back(), t3.str());
  }

  if (std::any_of(report.states.begin(), report.states.end(), [](const StateReport& s) { return s.cf.has_value(); })) {
    std::ostringstream cf;
    cf << "model,beta,re,im,abs,sigma\n";
    for (const auto& s : report.states) {
      if (!s.cf) continue;
      const auto& c = s.cf->curve;
      for (std::size_t k = 0; k < c.size(); ++k) {
        cf << csv_field(s.label) << "," << num(c.betas[k]) << "," << num(c.values[k].real()) << ","
           << num(c.values[k].imag()) << "," << num(std::abs(c.values[k])) << "," << num(c.sigmas[k]) << "\n";
      }
    }
    written.push_back(dir / "cf_curves.csv");
    write_text(written.back(), cf.str());
  }
  return written;
}

}  // namespace pdsq
