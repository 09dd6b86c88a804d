#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/fbsim.hpp"

namespace frontlab {

/// 17 significant digits, so values round-trip exactly.
std::string format_real(double v);

/// Writes a header line and one row per index. All columns must have the same
/// length. Parent directories are created.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Writes dir/snapshots/000.csv, 001.csv, ... with columns x,u.
void write_snapshots(const std::filesystem::path& dir, const std::vector<Snapshot>& snapshots);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace frontlab
