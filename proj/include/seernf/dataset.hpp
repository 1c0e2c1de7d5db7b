#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seernf/io.hpp"
#include "seernf/project.hpp"
#include "seernf/value_table.hpp"

namespace seernf {

enum class SourceModel { cocomo81, cocomo87 };

std::string_view to_string(SourceModel model);
SourceModel parse_source_model(std::string_view text);

/// Cost drivers recognised for each source model.
const std::vector<std::string_view>& source_drivers(SourceModel model);

/// Source rating labels, lowest first: VL L N H VH XH.
const std::vector<std::string_view>& source_labels();

struct RawProjectRecord {
  std::string id;
  double size_kloc = 0.0;
  double actual_effort = 0.0;  // person-years after unit normalisation
  std::string declared_unit = "PM";
  SourceModel source_model = SourceModel::cocomo81;
  std::string mode;
  std::map<std::string, std::string> ratings;  // driver -> canonical label
  std::optional<double> sibr;
};

/// Historical dataset CSV. Required columns: id, model, size_kloc, effort.
/// Optional: unit (PM or PY, default PM), mode, sibr. Every other column is
/// a source cost driver; empty cells mean the driver was not recorded.
///
/// Throws ParseError (with row number) for malformed rows or labels outside
/// VL..XH, and SchemaError for columns that are not drivers of any source
/// model or ratings given for a driver the row's model does not have.
std::vector<RawProjectRecord> parse_dataset(std::string_view text, double months_per_year = 12.0);
std::vector<RawProjectRecord> load_dataset(const std::filesystem::path& path,
                                           double months_per_year = 12.0);

struct MappingRule {
  std::string source;  // source cost driver
  Param target = Param::ACAP;
  std::map<std::string, double> levels;  // source label -> coordinate
};

/// Composed COCOMO → SEER-SEM mapping, one rule list per source model.
/// Rated parameters without a rule receive `default_coordinate`.
struct MappingTable {
  std::string note;
  double default_coordinate = kNominalCoordinate;
  std::map<SourceModel, std::vector<MappingRule>> rules;
};

/// Coordinates used for a rule that does not list its own levels.
const std::map<std::string, double>& standard_levels();

/// Throws MappingError when a model maps two rules onto one parameter, a
/// rule names a driver its model does not have, or a coordinate leaves
/// [1, 18].
void validate_mapping(const MappingTable& mapping);

MappingTable mapping_from_json(const json& doc);
json mapping_to_json(const MappingTable& mapping);
MappingTable load_mapping(const std::filesystem::path& path);

/// Converts a record into a SeerProject. Throws MappingError when a rule
/// refers to a driver the record does not carry or to a label the rule does
/// not list.
SeerProject transfer(const RawProjectRecord& record, const MappingTable& mapping);

/// 1-based inclusive index range.
struct IndexRange {
  int first = 1;
  int last = 1;
};

struct SplitProtocol {
  enum class Kind { c1, c2, c3, c4_1, c4_2, index_range, mre_threshold };

  Kind kind = Kind::c2;
  IndexRange train_range;
  IndexRange test_range;
  double mre_threshold = 0.5;

  /// Accepts c1, c2, c3, c4-1, c4-2, "range:A-B/C-D" (train A..B, test
  /// C..D) and "mre:L" (train on baseline MRE <= L, test on all).
  static SplitProtocol parse(std::string_view text);
  std::string name() const;
};

struct Split {
  std::vector<SeerProject> training;
  std::vector<SeerProject> testing;
};

/// Applies a protocol. MRE-based protocols use `baseline` to compute each
/// project's uncalibrated MRE. Throws ProtocolError for an empty training
/// list or ranges that do not fit the dataset.
Split split(std::span<const SeerProject> projects, const SplitProtocol& protocol,
            const ValueTable& baseline);

}  // namespace seernf
