#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "pdsq/dataset_io.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/report.hpp"

using namespace pdsq;
namespace fs = std::filesystem;

namespace {

std::string bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_bytes(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pdsq_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

// Raw container with the given header and payload, for corruption tests.
std::string container(const std::string& header, std::size_t doubles) {
  std::string s(kDatasetMagic, 8);
  const std::uint32_t len = header.size();
  s.append(reinterpret_cast<const char*>(&len), 4);
  s += header;
  s.append(doubles * 8, '\0');
  return s;
}

RunConfig small_config() {
  RunConfig c = catalog_config();
  c.n = 20000;
  c.bootstrap_replicates = 5;
  c.matrix_dims = {2, 3};
  c.hong_mandel_n_max = 3;
  c.witness_betas = {1.0, 2.0};
  c.grid.points = 21;
  return c;
}

}  // namespace

using DatasetIo = TempDir;
using ReportIo = TempDir;

TEST_F(DatasetIo, RoundTripIsBitExact) {
  QuadratureDataset d;
  d.samples = {0.1, -2.5e-300, 1e300};
  d.angle = Angle::degrees(30);
  d.meta.seed = 17;
  d.meta.model = StateModel{validate_params(0.36, 5.28), PhaseNoiseModel::gaussian(Angle::degrees(6.3))};
  write_dataset(d, dir_ / "a.bin");
  const auto r = read_dataset(dir_ / "a.bin");
  EXPECT_EQ(r.samples, d.samples);
  EXPECT_EQ(r.angle.rad(), d.angle.rad());
  EXPECT_EQ(r.meta.seed, 17u);
  EXPECT_EQ(r.meta.model, d.meta.model);
  write_dataset(r, dir_ / "b.bin");
  EXPECT_EQ(bytes_of(dir_ / "a.bin"), bytes_of(dir_ / "b.bin"));
}

TEST_F(DatasetIo, FileSizeArithmetic) {
  const auto d = sample_quadratures(vacuum_model(), {}, 1000, 1);
  write_dataset(d, dir_ / "v.bin");
  EXPECT_EQ(fs::file_size(dir_ / "v.bin"), 12 + dataset_header(d).size() + 8 * 1000);
}

TEST_F(DatasetIo, SameSeedSameBytes) {
  const StateModel m{validate_params(0.36, 5.28), PhaseNoiseModel::uniform()};
  write_dataset(sample_quadratures(m, {}, 5000, 3), dir_ / "a.bin");
  write_dataset(sample_quadratures(m, {}, 5000, 3), dir_ / "b.bin");
  EXPECT_EQ(bytes_of(dir_ / "a.bin"), bytes_of(dir_ / "b.bin"));
}

TEST_F(DatasetIo, GoldenFile) {
  const StateModel m{validate_params(0.36, 5.28), PhaseNoiseModel::gaussian(Angle::degrees(6.3))};
  write_dataset(sample_quadratures(m, {}, 16, 42), dir_ / "g.bin");
  EXPECT_EQ(bytes_of(dir_ / "g.bin"), bytes_of(fs::path(PDSQ_TEST_DATA) / "golden_gaussian_6.3deg_seed42_n16.bin"));
}

TEST_F(DatasetIo, TruncatedPayload) {
  const std::string header = R"({"created":null,"model":null,"n":10,"seed":1,"theta":{"rad":0.0}})";
  put_bytes(dir_ / "t.bin", container(header, 9));
  EXPECT_THROW(read_dataset(dir_ / "t.bin"), IoError);
  put_bytes(dir_ / "ok.bin", container(header, 10));
  EXPECT_EQ(read_dataset(dir_ / "ok.bin").size(), 10u);
}

TEST_F(DatasetIo, BadMagicAndMalformedHeader) {
  put_bytes(dir_ / "m.bin", "NOTMAGIC\x02\0\0\0{}");
  EXPECT_THROW(read_dataset(dir_ / "m.bin"), IoError);
  put_bytes(dir_ / "h.bin", container("{\"n\": 1", 1));
  EXPECT_THROW(read_dataset(dir_ / "h.bin"), IoError);
  put_bytes(dir_ / "k.bin", container(R"({"created":null,"model":null,"n":1})", 1));
  EXPECT_THROW(read_dataset(dir_ / "k.bin"), IoError);
  put_bytes(dir_ / "z.bin", container(R"({"created":null,"model":null,"n":0,"seed":1,"theta":{"rad":0.0}})", 0));
  EXPECT_THROW(read_dataset(dir_ / "z.bin"), IoError);
  std::string shorty(kDatasetMagic, 8);
  shorty += "\xff\xff\0\0";
  put_bytes(dir_ / "s.bin", shorty);
  EXPECT_THROW(read_dataset(dir_ / "s.bin"), IoError);
  EXPECT_THROW(read_dataset(dir_ / "missing.bin"), IoError);
}

TEST_F(DatasetIo, CsvImport) {
  put_bytes(dir_ / "x.csv", "# exported from a scope\n# theta = deg:30\n0.5\n-1.25\n\n3e-1\n");
  const auto d = load_dataset(dir_ / "x.csv");
  EXPECT_EQ(d.samples, (std::vector<double>{0.5, -1.25, 0.3}));
  EXPECT_NEAR(d.angle.deg(), 30.0, 1e-12);
  EXPECT_FALSE(d.meta.model.has_value());
  put_bytes(dir_ / "bad.csv", "0.5\nabc\n");
  EXPECT_THROW(load_dataset(dir_ / "bad.csv"), IoError);
  put_bytes(dir_ / "unit.csv", "# theta = 30\n1.0\n");
  EXPECT_THROW(load_dataset(dir_ / "unit.csv"), IoError);
  put_bytes(dir_ / "empty.csv", "# nothing\n");
  EXPECT_THROW(load_dataset(dir_ / "empty.csv"), IoError);
}

TEST(Config, AnglesNeedUnits) {
  EXPECT_EQ(parse_angle("deg:6.3").value, 6.3);
  EXPECT_EQ(parse_angle("rad:0.5").unit, AngleUnit::Radians);
  EXPECT_THROW(parse_angle("6.3"), InvalidArgument);
  EXPECT_THROW(parse_angle("deg:"), InvalidArgument);
  EXPECT_THROW(parse_angle("deg:1x"), InvalidArgument);
  EXPECT_THROW(parse_angle("grad:1"), InvalidArgument);
  EXPECT_NEAR(parse_angle("deg:180").angle().rad(), 3.141592653589793, 1e-15);
}

TEST(Config, RoundTrip) {
  RunConfig c = catalog_config();
  c.theta = parse_angle("deg:0.1");
  c.seed = 123456789012345ull;
  c.grid = {0.0, 3.3, 77};
  c.witness_betas = {0.1, 1.0 / 3.0};
  c.output_dir = "out dir";
  c.formats = {"csv"};
  const auto text = to_json(c).dump();
  EXPECT_EQ(config_from_json(nlohmann::json::parse(text)), c);
  EXPECT_EQ(to_json(config_from_json(nlohmann::json::parse(text))).dump(), text);
}

TEST(Config, StrictParsing) {
  auto j = to_json(catalog_config());
  j["bogus"] = 1;
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = to_json(catalog_config());
  j["models"][0]["sigma"] = "6.3";
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = to_json(catalog_config());
  j["n"] = "many";
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = to_json(catalog_config());
  j["models"][1]["label"] = j["models"][0]["label"];
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = to_json(catalog_config());
  j["analyses"] = {"cf", "fourier"};
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), InvalidArgument);
}

TEST(Report, UncertaintyFormat) {
  EXPECT_EQ(format_uncertain(-0.6362, 0.0006362), "-0.6362(1±0.1%)");
  EXPECT_EQ(format_uncertain(1.0, 0.0), "1(1±0%)");
}

TEST_F(ReportIo, EmptyAnalysesEchoConfigOnly) {
  RunConfig c = small_config();
  c.analyses.clear();
  const auto r = run(c);
  EXPECT_TRUE(r.states.empty());
  const auto written = emit(r, {"json", "csv"}, dir_);
  ASSERT_EQ(written.size(), 1u);
  EXPECT_EQ(written[0].filename(), "report.json");
  const auto j = nlohmann::json::parse(bytes_of(written[0]));
  EXPECT_EQ(config_from_json(j.at("config")), c);
  EXPECT_TRUE(j.at("states").empty());
}

TEST_F(ReportIo, RunIsDeterministicAndRoundTrips) {
  const auto c = small_config();
  const auto a = to_json(run(c));
  const auto b = to_json(run(c));
  EXPECT_EQ(strip_volatile(a), strip_volatile(b));
  EXPECT_EQ(a.at("states").size(), 5u);

  const auto parsed = report_from_json(a);
  EXPECT_EQ(strip_volatile(to_json(parsed)), strip_volatile(a));

  emit(run(c), {"csv"}, dir_ / "direct");
  emit(parsed, {"csv"}, dir_ / "replayed");
  for (const char* f : {"table1.csv", "table2.csv", "table3.csv", "cf_curves.csv"}) {
    EXPECT_EQ(bytes_of(dir_ / "direct" / f), bytes_of(dir_ / "replayed" / f)) << f;
  }
  std::istringstream t1(bytes_of(dir_ / "direct" / "table1.csv"));
  std::string line;
  std::getline(t1, line);
  EXPECT_EQ(line, "model,noise,sigma_deg,v_eff");
  std::getline(t1, line);
  EXPECT_EQ(line.rfind("sigma=0.0deg,gaussian,0,0.36", 0), 0u) << line;
  std::istringstream cf(bytes_of(dir_ / "direct" / "cf_curves.csv"));
  std::getline(cf, line);
  EXPECT_EQ(line, "model,beta,re,im,abs,sigma");
}

TEST_F(ReportIo, VacuumReportIsClassical) {
  RunConfig c = small_config();
  c.n = 200000;
  c.bootstrap_replicates = 20;
  c.models = {ModelSpec{"vacuum", PhaseNoiseKind::Delta, 1.0, 1.0, std::nullopt}};
  const auto r = run(c);
  ASSERT_EQ(r.states.size(), 1u);
  const auto& s = r.states[0];
  EXPECT_FALSE(s.cf->significance.detected);
  for (std::size_t k = 0; k < s.moments->degrees.q.size(); ++k) {
    EXPECT_LT(std::abs(s.moments->degrees.q[k]), 5 * s.moments->degrees.sigmas[k]);
  }
  for (const auto& e : s.matrices->eigen) EXPECT_GT(e.lambda_min, -5 * e.sigma);
  EXPECT_FALSE(s.witness->certificate.has_value());
  EXPECT_FALSE(s.witness->note.empty());
}

TEST_F(ReportIo, UnwritableDirectory) {
  put_bytes(dir_ / "file", "x");
  EXPECT_THROW(emit(run(small_config()), {"json"}, dir_ / "file" / "sub"), IoError);
}
