// pdsq: simulate phase-diffused squeezed vacuum homodyne data and test it for nonclassicality.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdsq/dataset_io.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/report.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kAnalysis = 2, kIo = 3 };

std::string iso_now() {
  const auto t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pdsq::IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pdsq::InvalidArgument(path + ": " + e.what());
  }
}

void print_summary(const pdsq::Report& report) {
  for (const auto& s : report.states) {
    std::cout << s.label << "  n=" << s.n;
    if (s.v_eff) std::cout << "  V_eff=" << *s.v_eff;
    std::cout << "\n";
    if (s.cf) {
      const auto& sig = s.cf->significance;
      std::cout << "  cf:       s*=" << sig.s_star << " at beta=" << sig.beta_star
                << (sig.detected ? "  detected" : "  not detected") << "\n";
    }
    if (s.moments) {
      std::cout << "  q:       ";
      const auto& d = s.moments->degrees;
      for (std::size_t k = 0; k < d.q.size(); ++k) {
        std::cout << " q" << d.orders[k] << "=" << pdsq::format_uncertain(d.q[k], d.sigmas[k]);
      }
      std::cout << "\n";
    }
    if (s.matrices) {
      std::cout << "  lambda:  ";
      for (const auto& e : s.matrices->eigen) {
        std::cout << " l" << e.l << "=" << pdsq::format_uncertain(e.lambda_min, e.sigma);
      }
      std::cout << "\n";
    }
    if (s.witness) {
      if (s.witness->certificate) {
        const auto& c = *s.witness->certificate;
        std::cout << "  witness:  n=" << c.n << " eps=" << c.eps << " phi0=" << c.phi0.deg() << "deg mass=" << c.mass
                  << (s.witness->verification && s.witness->verification->holds ? "  bound holds" : "") << "\n";
      } else {
        std::cout << "  witness:  " << s.witness->note << "\n";
      }
    }
  }
}

void emit_and_list(const pdsq::Report& report, const pdsq::RunConfig& config, const std::string& dir) {
  for (const auto& path : pdsq::emit(report, config.formats, dir.empty() ? "." : dir)) {
    std::cerr << "wrote " << path.string() << "\n";
  }
}

struct AnalysisFlags {
  bool cf = false, moments = false, matrices = false, witness = false;

  void apply(pdsq::RunConfig& config) const {
    config.analyses.clear();
    const bool all = !(cf || moments || matrices || witness);
    if (all || cf) config.analyses.push_back(pdsq::Analysis::Cf);
    if (all || moments) config.analyses.push_back(pdsq::Analysis::Moments);
    if (all || matrices) config.analyses.push_back(pdsq::Analysis::Matrices);
    if (all || witness) config.analyses.push_back(pdsq::Analysis::Witness);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-diffused squeezed vacuum: simulation and nonclassicality tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pdsq::kVersion));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw homodyne samples from a state model");
  std::string noise = "delta", sigma_text, theta_text = "rad:0", out_path;
  double v_x = 0.36, v_p = 5.28;
  std::size_t n_samples = 10'000'000;
  std::uint64_t seed = 1;
  bool stamp = false;
  simulate->add_option("--noise", noise, "delta | gaussian | uniform")
      ->check(CLI::IsMember({"delta", "gaussian", "uniform"}));
  simulate->add_option("--vx", v_x, "Minimum quadrature variance");
  simulate->add_option("--vp", v_p, "Maximum quadrature variance");
  simulate->add_option("--sigma", sigma_text, "Gaussian phase noise width, deg:<x> or rad:<x>");
  simulate->add_option("--theta", theta_text, "Measurement angle, deg:<x> or rad:<x>");
  simulate->add_option("--n", n_samples, "Number of samples");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--out", out_path, "Output dataset file")->required();
  simulate->add_flag("--stamp-time", stamp, "Record the creation time in the header (breaks byte identity)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Run nonclassicality tests on a dataset");
  pdsq::RunConfig acfg;
  std::string in_path, label, out_dir;
  AnalysisFlags flags;
  std::vector<std::string> formats;
  analyze->add_option("--in", in_path, "Dataset file (binary container or one value per line)")->required();
  analyze->add_option("--label", label, "Row label in the tables (default: file stem)");
  analyze->add_flag("--cf", flags.cf, "Characteristic-function scan");
  analyze->add_flag("--moments", flags.moments, "Hong-Mandel squeezing degrees");
  analyze->add_flag("--matrices", flags.matrices, "Minimum eigenvalues of the moment matrices");
  analyze->add_flag("--witness", flags.witness, "Witness certificate (needs a model in the header)");
  analyze->add_option("--grid-min", acfg.grid.min);
  analyze->add_option("--grid-max", acfg.grid.max);
  analyze->add_option("--grid-points", acfg.grid.points);
  analyze->add_option("--threshold", acfg.significance_threshold, "Significance threshold in standard deviations");
  analyze->add_option("--replicates", acfg.bootstrap_replicates, "Bootstrap replicates");
  analyze->add_option("--n-max", acfg.hong_mandel_n_max, "Highest squeezing order is 2 n-max");
  analyze->add_option("--dims", acfg.matrix_dims, "Moment matrix dimensions");
  analyze->add_option("--seed", acfg.seed, "Bootstrap seed");
  analyze->add_option("--out-dir", out_dir, "Directory for report files");
  analyze->add_option("--format", formats, "json and/or csv")->check(CLI::IsMember({"json", "csv"}));

  // report
  auto* report_cmd = app.add_subcommand("report", "Run a JSON config, or re-emit an existing report");
  std::string config_path, from_path, report_dir;
  std::vector<std::string> report_formats;
  auto* config_opt = report_cmd->add_option("--config", config_path, "Run configuration (JSON)");
  auto* from_opt = report_cmd->add_option("--from", from_path, "Existing report.json to re-emit");
  config_opt->excludes(from_opt);
  report_cmd->add_option("--out-dir", report_dir, "Overrides the config's output directory");
  report_cmd->add_option("--format", report_formats, "json and/or csv")->check(CLI::IsMember({"json", "csv"}));

  // catalog
  auto* catalog = app.add_subcommand("catalog", "Simulate and analyze the five catalog states");
  pdsq::RunConfig ccfg = pdsq::catalog_config();
  std::string catalog_dir = "catalog";
  catalog->add_option("--n", ccfg.n, "Samples per state");
  catalog->add_option("--seed", ccfg.seed, "Base seed; state i uses seed + i");
  catalog->add_option("--replicates", ccfg.bootstrap_replicates, "Bootstrap replicates");
  catalog->add_option("--out-dir", catalog_dir, "Directory for report files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) {
      pdsq::ModelSpec spec{"simulate", pdsq::PhaseNoiseKind::Gaussian, v_x, v_p, std::nullopt};
      spec.noise = noise == "delta" ? pdsq::PhaseNoiseKind::Delta
                   : noise == "uniform" ? pdsq::PhaseNoiseKind::Uniform
                                        : pdsq::PhaseNoiseKind::Gaussian;
      if (!sigma_text.empty()) {
        if (spec.noise != pdsq::PhaseNoiseKind::Gaussian) throw pdsq::InvalidArgument("--sigma applies to gaussian noise only");
        spec.sigma = pdsq::parse_angle(sigma_text);
      }
      if (n_samples == 0) throw pdsq::InvalidArgument("--n must be at least 1");
      auto data = pdsq::sample_quadratures(spec.model(), pdsq::parse_angle(theta_text).angle(), n_samples, seed);
      if (stamp) data.meta.created = iso_now();
      pdsq::write_dataset(data, out_path);
      std::cerr << "wrote " << n_samples << " samples to " << out_path << "\n";
    } else if (*analyze) {
      flags.apply(acfg);
      if (!formats.empty()) acfg.formats = formats;
      pdsq::validate(acfg);
      const auto data = pdsq::load_dataset(in_path);
      if (label.empty()) label = std::filesystem::path(in_path).stem().string();
      pdsq::Report report;
      report.config = acfg;
      report.created = iso_now();
      report.states.push_back(pdsq::analyze_dataset(data, acfg, label, acfg.seed, &report.timings));
      print_summary(report);
      emit_and_list(report, acfg, out_dir);
    } else if (*report_cmd) {
      if (config_path.empty() == from_path.empty()) {
        throw pdsq::InvalidArgument("report needs exactly one of --config or --from");
      }
      if (!config_path.empty()) {
        auto config = pdsq::config_from_json(read_json(config_path));
        if (!report_formats.empty()) config.formats = report_formats;
        const auto report = pdsq::run(config);
        print_summary(report);
        emit_and_list(report, config, report_dir.empty() ? config.output_dir : report_dir);
      } else {
        const auto report = pdsq::report_from_json(read_json(from_path));
        auto config = report.config;
        config.formats = report_formats.empty() ? std::vector<std::string>{"csv"} : report_formats;
        emit_and_list(report, config,
                      report_dir.empty() ? std::filesystem::path(from_path).parent_path().string() : report_dir);
      }
    } else if (*catalog) {
      ccfg.output_dir = catalog_dir;
      const auto report = pdsq::run(ccfg);
      print_summary(report);
      emit_and_list(report, ccfg, catalog_dir);
    }
  } catch (const pdsq::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const pdsq::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const pdsq::AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAnalysis;
  }
  return kOk;
}
