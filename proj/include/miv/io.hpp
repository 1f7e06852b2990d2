#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "miv/types.hpp"

namespace miv {

/// Reads a numeric CSV. With expect_header the first line is skipped (column
/// names are not interpreted).
Matrix read_csv(const std::string& path, bool expect_header);

/// Writes a CSV, emitting a header line when column names are given.
void write_csv(const std::string& path, const Matrix& m,
               const std::vector<std::string>& column_names);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);

/// FNV-1a over the raw matrix bytes; used for dataset provenance stamps.
std::uint64_t dataset_hash(const Matrix& m);

}  // namespace miv
