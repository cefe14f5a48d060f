#include "pdsq/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "pdsq/config.hpp"
#include "pdsq/errors.hpp"

namespace pdsq {

namespace {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

nlohmann::json model_to_json(const StateModel& model) {
  nlohmann::json j;
  j["noise"] = to_string(model.noise.kind());
  j["v_x"] = model.params.v_x();
  j["v_p"] = model.params.v_p();
  if (model.noise.kind() == PhaseNoiseKind::Gaussian) j["sigma_rad"] = model.noise.sigma().rad();
  return j;
}

StateModel model_from_json(const nlohmann::json& j) {
  const auto params = validate_params(j.at("v_x").get<double>(), j.at("v_p").get<double>());
  const auto noise = j.at("noise").get<std::string>();
  if (noise == "delta") return {params, PhaseNoiseModel::delta()};
  if (noise == "uniform") return {params, PhaseNoiseModel::uniform()};
  if (noise == "gaussian") {
    return {params, PhaseNoiseModel::gaussian(Angle::radians(j.at("sigma_rad").get<double>()))};
  }
  throw InvalidArgument("unknown noise kind '" + noise + "'");
}

std::string dataset_header(const QuadratureDataset& data) {
  nlohmann::json header;
  header["created"] = data.meta.created ? nlohmann::json(*data.meta.created) : nlohmann::json(nullptr);
  header["model"] = data.meta.model ? model_to_json(*data.meta.model) : nlohmann::json(nullptr);
  header["n"] = data.size();
  header["seed"] = data.meta.seed;
  header["theta"] = {{"rad", data.angle.rad()}};
  return header.dump();
}

void write_dataset(const QuadratureDataset& data, const std::filesystem::path& path) {
  if (data.samples.empty()) throw InvalidArgument("write_dataset: empty dataset");
  const std::string header = dataset_header(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kDatasetMagic, sizeof kDatasetMagic);
  const auto length = to_little_endian(static_cast<std::uint32_t>(header.size()));
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data.samples.data()),
              static_cast<std::streamsize>(data.samples.size() * sizeof(double)));
  } else {
    for (double v : data.samples) {
      const double le = to_little_endian(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

QuadratureDataset read_dataset(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  constexpr std::size_t prefix = sizeof kDatasetMagic + sizeof(std::uint32_t);
  if (bytes.size() < prefix || std::memcmp(bytes.data(), kDatasetMagic, sizeof kDatasetMagic) != 0) {
    throw IoError(path.string() + ": bad magic, not a PDSQDAT1 dataset");
  }
  std::uint32_t length;
  std::memcpy(&length, bytes.data() + sizeof kDatasetMagic, sizeof length);
  length = to_little_endian(length);
  if (bytes.size() < prefix + length) throw IoError(path.string() + ": truncated header");

  QuadratureDataset data;
  std::uint64_t n = 0;
  try {
    const auto header = nlohmann::json::parse(bytes.begin() + prefix, bytes.begin() + prefix + length);
    n = header.at("n").get<std::uint64_t>();
    data.meta.seed = header.at("seed").get<std::uint64_t>();
    data.angle = Angle::radians(header.at("theta").at("rad").get<double>());
    if (!header.at("model").is_null()) data.meta.model = model_from_json(header.at("model"));
    if (!header.at("created").is_null()) data.meta.created = header.at("created").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": malformed header: " + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": malformed header: " + e.what());
  }
  if (n == 0) throw IoError(path.string() + ": header declares zero samples");

  const std::size_t payload = bytes.size() - prefix - length;
  if (payload != n * sizeof(double)) {
    std::ostringstream msg;
    msg << path.string() << ": payload holds " << payload << " bytes, header n=" << n << " needs "
        << n * sizeof(double);
    throw IoError(msg.str());
  }
  data.samples.resize(n);
  std::memcpy(data.samples.data(), bytes.data() + prefix + length, payload);
  if constexpr (std::endian::native != std::endian::little) {
    for (double& v : data.samples) v = to_little_endian(v);
  }
  return data;
}

QuadratureDataset read_csv_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  QuadratureDataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string meta = trim(std::string_view(text).substr(1));
      const auto eq = meta.find_first_of("=:");
      if (eq != std::string::npos && trim(meta.substr(0, eq)) == "theta") {
        try {
          data.angle = parse_angle(trim(meta.substr(eq + 1))).angle();
        } catch (const InvalidArgument& e) {
          throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
      }
      continue;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a finite number: '" + text + "'");
    }
    data.samples.push_back(value);
  }
  if (data.samples.empty()) throw IoError(path.string() + ": no samples");
  return data;
}

QuadratureDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char head[sizeof kDatasetMagic] = {};
  in.read(head, sizeof head);
  if (in.gcount() == sizeof head && std::memcmp(head, kDatasetMagic, sizeof head) == 0) return read_dataset(path);
  return read_csv_dataset(path);
}

}  // namespace pdsq
