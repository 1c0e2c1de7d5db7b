#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seernf/project.hpp"
#include "seernf/value_table.hpp"

namespace seernf {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kTableFormat = "seernf-value-table/1";
inline constexpr std::string_view kProjectsFormat = "seernf-projects/1";

/// Value table file layout:
///
///   {
///     "format": "seernf-value-table/1",
///     "label": "...",                 // optional
///     "provenance": { ... },          // optional, written by calibration
///     "parameters": [
///       {"symbol": "ACAP", "index": 1, "direction": "decreasing",
///        "values": [18 numbers, VLo- first]},
///       ...  one entry per rated parameter
///     ]
///   }
///
/// "index" is informational and follows the IndexMap used when writing.
json table_to_json(const ValueTable& table, const json& provenance = nullptr,
                   const IndexMap& indices = IndexMap::canonical());

/// Throws ParseError for missing or duplicated parameters, missing levels,
/// or non-numeric values. Does not check monotonicity.
ValueTable table_from_json(const json& doc);

/// Throws IoError("table not found: ...") when the file does not exist.
ValueTable load_table(const std::filesystem::path& path);
void save_table(const std::filesystem::path& path, const ValueTable& table,
                const json& provenance = nullptr);

/// SeerProject JSON: {"format": "seernf-projects/1", "projects": [{"id",
/// "size_sloc", "effort_py", "sibr", "weight", "ratings": {SYM: x, ...}}]}.
/// Ratings may be numeric coordinates or labels; absent ones are Nominal.
json projects_to_json(const std::vector<SeerProject>& projects);
std::vector<SeerProject> projects_from_json(const json& doc);

/// SeerProject CSV: header id,size_sloc,effort_py,sibr,weight followed by
/// one column per rated symbol in canonical order.
std::string projects_to_csv(const std::vector<SeerProject>& projects);
std::vector<SeerProject> projects_from_csv(std::string_view text);

/// Dispatches on extension (.json or .csv).
std::vector<SeerProject> load_projects(const std::filesystem::path& path);
void save_projects(const std::filesystem::path& path, const std::vector<SeerProject>& projects);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: parent directories are
/// created, content replaces any existing file.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Renders a double with the shortest round-trip representation.
std::string format_number(double v);

}  // namespace seernf
