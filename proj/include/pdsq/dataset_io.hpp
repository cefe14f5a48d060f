#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pdsq/sampler.hpp"

namespace pdsq {

/// Binary dataset container:
///   8 bytes   magic "PDSQDAT1"
///   4 bytes   little-endian header length L
///   L bytes   UTF-8 JSON header {created, model, n, seed, theta}
///   8 n bytes little-endian IEEE-754 doubles
inline constexpr char kDatasetMagic[8] = {'P', 'D', 'S', 'Q', 'D', 'A', 'T', '1'};

nlohmann::json model_to_json(const StateModel& model);
StateModel model_from_json(const nlohmann::json& j);

/// Header JSON as written to the container (keys sorted, compact).
std::string dataset_header(const QuadratureDataset& data);

void write_dataset(const QuadratureDataset& data, const std::filesystem::path& path);
/// Throws IoError on bad magic, malformed header or a payload that does not hold exactly n doubles.
QuadratureDataset read_dataset(const std::filesystem::path& path);

/// Plain-text import: one value per line; `#` lines carry metadata. A line
/// `# theta = deg:30` (or rad:) sets the measurement angle; other metadata is ignored.
QuadratureDataset read_csv_dataset(const std::filesystem::path& path);

/// Dispatches on the first bytes: the binary magic selects read_dataset, anything else read_csv_dataset.
QuadratureDataset load_dataset(const std::filesystem::path& path);

}  // namespace pdsq
