#include "seernf/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "seernf/calibration.hpp"
#include "seernf/errors.hpp"

namespace seernf {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

/// Canonical source label, or empty when the token is not on the scale.
std::string canonical_label(std::string_view token) {
  const std::string u = upper(trim(token));
  if (u == "EH" || u == "XH" || u == "EXH") return "XH";
  for (std::string_view l : source_labels()) {
    if (u == l) return u;
  }
  return {};
}

bool has_driver(SourceModel model, std::string_view driver) {
  const auto& drivers = source_drivers(model);
  return std::find(drivers.begin(), drivers.end(), driver) != drivers.end();
}

double parse_number(std::string_view text, int row, std::string_view column) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("dataset row {}: column '{}' value '{}' is not a number", row,
                                 column, text));
  }
}

}  // namespace

std::string_view to_string(SourceModel model) {
  return model == SourceModel::cocomo81 ? "COCOMO81" : "COCOMO87";
}

SourceModel parse_source_model(std::string_view text) {
  const std::string u = upper(trim(text));
  if (u == "COCOMO81" || u == "COCOMO 81" || u == "81") return SourceModel::cocomo81;
  if (u == "COCOMO87" || u == "COCOMO 87" || u == "87") return SourceModel::cocomo87;
  throw ParseError(fmt::format("unknown source model '{}'", text));
}

const std::vector<std::string_view>& source_drivers(SourceModel model) {
  static const std::vector<std::string_view> cocomo81 = {
      "RELY", "DATA", "CPLX", "TIME", "STOR", "VIRT", "TURN", "ACAP",
      "AEXP", "PCAP", "VEXP", "LEXP", "MODP", "TOOL", "SCED"};
  // The 1987 form splits VIRT into host and target volatility and adds RUSE.
  static const std::vector<std::string_view> cocomo87 = {
      "RELY", "DATA", "CPLX", "RUSE", "TIME", "STOR", "VMVH", "VMVT", "TURN",
      "ACAP", "AEXP", "PCAP", "VEXP", "LEXP", "MODP", "TOOL", "SCED"};
  return model == SourceModel::cocomo81 ? cocomo81 : cocomo87;
}

const std::vector<std::string_view>& source_labels() {
  static const std::vector<std::string_view> labels = {"VL", "L", "N", "H", "VH", "XH"};
  return labels;
}

const std::map<std::string, double>& standard_levels() {
  // Centre (neutral sub-level) of each main SEER-SEM rating.
  static const std::map<std::string, double> levels = {
      {"VL", 2.0}, {"L", 5.0}, {"N", 8.0}, {"H", 11.0}, {"VH", 14.0}, {"XH", 17.0}};
  return levels;
}

// ---------------------------------------------------------------- parsing

std::vector<RawProjectRecord> parse_dataset(std::string_view text, double months_per_year) {
  if (!(months_per_year > 0.0)) throw RangeError("months per person-year must be positive");
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("dataset: empty file");

  const std::vector<std::string> header = split_csv_line(line);
  enum class Col { id, model, size, effort, unit, mode, sibr, driver };
  std::vector<Col> kinds;
  std::vector<std::string> names;
  std::set<std::string> required = {"id", "model", "size_kloc", "effort"};
  for (const std::string& raw : header) {
    const std::string name = trim(raw);
    const std::string lower = [&] {
      std::string s = name;
      for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return s;
    }();
    required.erase(lower);
    names.push_back(upper(name));
    if (lower == "id") kinds.push_back(Col::id);
    else if (lower == "model") kinds.push_back(Col::model);
    else if (lower == "size_kloc") kinds.push_back(Col::size);
    else if (lower == "effort") kinds.push_back(Col::effort);
    else if (lower == "unit") kinds.push_back(Col::unit);
    else if (lower == "mode") kinds.push_back(Col::mode);
    else if (lower == "sibr") kinds.push_back(Col::sibr);
    else if (has_driver(SourceModel::cocomo81, names.back()) ||
             has_driver(SourceModel::cocomo87, names.back())) {
      kinds.push_back(Col::driver);
    } else {
      throw SchemaError(fmt::format("dataset: unknown driver column '{}'", name));
    }
  }
  if (!required.empty()) {
    throw SchemaError(fmt::format("dataset: missing required column '{}'", *required.begin()));
  }

  std::vector<RawProjectRecord> records;
  int row = 0;  // data rows, header excluded
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty() || trim(line) == "\r") continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("dataset row {}: {}", row, e.what()));
    }
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("dataset row {}: {} fields, expected {}", row, fields.size(),
                                   header.size()));
    }
    RawProjectRecord rec;
    double effort = 0.0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string value = trim(fields[c]);
      switch (kinds[c]) {
        case Col::id: rec.id = value; break;
        case Col::model:
          try {
            rec.source_model = parse_source_model(value);
          } catch (const ParseError&) {
            throw ParseError(fmt::format("dataset row {}: unknown model '{}'", row, value));
          }
          break;
        case Col::size: rec.size_kloc = parse_number(value, row, "size_kloc"); break;
        case Col::effort: effort = parse_number(value, row, "effort"); break;
        case Col::unit:
          if (!value.empty()) rec.declared_unit = upper(value);
          break;
        case Col::mode: rec.mode = value; break;
        case Col::sibr:
          if (!value.empty()) rec.sibr = parse_number(value, row, "sibr");
          break;
        case Col::driver:
          if (!value.empty()) {
            const std::string label = canonical_label(value);
            if (label.empty()) {
              throw ParseError(fmt::format("dataset row {}: {} rating '{}' is not one of VL L N H VH XH",
                                           row, names[c], value));
            }
            rec.ratings[names[c]] = label;
          }
          break;
      }
    }
    if (rec.id.empty()) rec.id = fmt::format("row{}", row);
    if (!(rec.size_kloc > 0.0)) {
      throw ParseError(fmt::format("dataset row {}: size_kloc must be positive", row));
    }
    if (!(effort > 0.0)) throw ParseError(fmt::format("dataset row {}: effort must be positive", row));
    if (rec.declared_unit == "PM") {
      rec.actual_effort = effort / months_per_year;
    } else if (rec.declared_unit == "PY") {
      rec.actual_effort = effort;
    } else {
      throw ParseError(fmt::format("dataset row {}: unit '{}' is not PM or PY", row, rec.declared_unit));
    }
    if (rec.sibr && !(*rec.sibr >= 0.0 && *rec.sibr <= 1.0)) {
      throw ParseError(fmt::format("dataset row {}: sibr {} outside [0, 1]", row, *rec.sibr));
    }
    for (const auto& [driver, label] : rec.ratings) {
      if (!has_driver(rec.source_model, driver)) {
        throw SchemaError(fmt::format("dataset row {}: driver {} does not belong to {}", row, driver,
                                      to_string(rec.source_model)));
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RawProjectRecord> load_dataset(const std::filesystem::path& path,
                                           double months_per_year) {
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("dataset not found: {}", path.string()));
  }
  return parse_dataset(read_text_file(path), months_per_year);
}

// ---------------------------------------------------------------- mapping

void validate_mapping(const MappingTable& mapping) {
  if (!(mapping.default_coordinate >= kMinCoordinate && mapping.default_coordinate <= kMaxCoordinate)) {
    throw MappingError(fmt::format("default coordinate {} outside [1, 18]", mapping.default_coordinate));
  }
  for (const auto& [model, rules] : mapping.rules) {
    std::set<Param> targets;
    for (const MappingRule& rule : rules) {
      if (!has_driver(model, rule.source)) {
        throw MappingError(fmt::format("{}: rule source {} is not a driver of this model",
                                       to_string(model), rule.source));
      }
      if (!is_rated(rule.target)) throw MappingError("SIBR cannot be a mapping target");
      if (!targets.insert(rule.target).second) {
        throw MappingError(fmt::format("{}: parameter {} is mapped more than once", to_string(model),
                                       symbol(rule.target)));
      }
      for (const auto& [label, x] : rule.levels) {
        if (canonical_label(label) != label) {
          throw MappingError(fmt::format("{} -> {}: unknown source label '{}'", rule.source,
                                         symbol(rule.target), label));
        }
        if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
          throw MappingError(fmt::format("{} -> {}: coordinate {} outside [1, 18]", rule.source,
                                         symbol(rule.target), x));
        }
      }
    }
  }
}

MappingTable mapping_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("models") || !doc["models"].is_object()) {
    throw ParseError("mapping: missing 'models' object");
  }
  MappingTable mapping;
  mapping.note = doc.value("note", std::string{});
  if (doc.contains("default_coordinate")) {
    if (!doc["default_coordinate"].is_number()) throw ParseError("mapping: default_coordinate must be numeric");
    mapping.default_coordinate = doc["default_coordinate"].get<double>();
  }
  for (const auto& [model_name, model_doc] : doc["models"].items()) {
    const SourceModel model = parse_source_model(model_name);
    if (!model_doc.contains("rules") || !model_doc["rules"].is_array()) {
      throw ParseError(fmt::format("mapping: model {} has no 'rules' array", model_name));
    }
    auto& rules = mapping.rules[model];
    for (const json& r : model_doc["rules"]) {
      if (!r.contains("source") || !r.contains("target")) {
        throw ParseError(fmt::format("mapping: {} rule needs 'source' and 'target'", model_name));
      }
      MappingRule rule;
      rule.source = upper(r["source"].get<std::string>());
      rule.target = parse_param(r["target"].get<std::string>());
      if (r.contains("levels")) {
        for (const auto& [label, x] : r["levels"].items()) {
          if (!x.is_number()) throw ParseError(fmt::format("mapping: {} level '{}' must be numeric", rule.source, label));
          rule.levels[upper(label)] = x.get<double>();
        }
      } else {
        rule.levels = standard_levels();
      }
      rules.push_back(std::move(rule));
    }
  }
  validate_mapping(mapping);
  return mapping;
}

json mapping_to_json(const MappingTable& mapping) {
  json doc;
  doc["format"] = "seernf-mapping/1";
  if (!mapping.note.empty()) doc["note"] = mapping.note;
  doc["default_coordinate"] = mapping.default_coordinate;
  json models = json::object();
  for (const auto& [model, rules] : mapping.rules) {
    json list = json::array();
    for (const MappingRule& rule : rules) {
      json r;
      r["source"] = rule.source;
      r["target"] = symbol(rule.target);
      json levels = json::object();
      for (std::string_view l : source_labels()) {
        if (auto it = rule.levels.find(std::string(l)); it != rule.levels.end()) levels[it->first] = it->second;
      }
      r["levels"] = std::move(levels);
      list.push_back(std::move(r));
    }
    models[std::string(to_string(model))]["rules"] = std::move(list);
  }
  doc["models"] = std::move(models);
  return doc;
}

MappingTable load_mapping(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("mapping not found: {}", path.string()));
  }
  try {
    return mapping_from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

SeerProject transfer(const RawProjectRecord& record, const MappingTable& mapping) {
  SeerProject project;
  project.id = record.id;
  project.size = record.size_kloc * 1000.0;
  project.actual_effort = record.actual_effort;
  project.sibr = record.sibr.value_or(0.0);
  project.ratings.fill(mapping.default_coordinate);

  const auto it = mapping.rules.find(record.source_model);
  if (it == mapping.rules.end()) {
    throw MappingError(fmt::format("mapping has no rules for {}", to_string(record.source_model)));
  }
  for (const MappingRule& rule : it->second) {
    const auto rating = record.ratings.find(rule.source);
    if (rating == record.ratings.end()) {
      throw MappingError(fmt::format("project '{}': rule {} -> {} refers to absent driver {}",
                                     record.id, rule.source, symbol(rule.target), rule.source));
    }
    const auto level = rule.levels.find(rating->second);
    if (level == rule.levels.end()) {
      throw MappingError(fmt::format("project '{}': rule {} -> {} has no coordinate for '{}'",
                                     record.id, rule.source, symbol(rule.target), rating->second));
    }
    project.set_rating(rule.target, level->second);
  }
  return project;
}

// ----------------------------------------------------------------- splits

SplitProtocol SplitProtocol::parse(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  SplitProtocol p;
  if (t == "c1") {
    p.kind = Kind::c1;
    p.mre_threshold = 0.5;
  } else if (t == "c2") {
    p.kind = Kind::c2;
  } else if (t == "c3") {
    p.kind = Kind::c3;
    p.mre_threshold = 1.5;
  } else if (t == "c4-1" || t == "c4_1") {
    p.kind = Kind::c4_1;
  } else if (t == "c4-2" || t == "c4_2") {
    p.kind = Kind::c4_2;
  } else if (t.rfind("range:", 0) == 0) {
    p.kind = Kind::index_range;
    int a = 0, b = 0, c = 0, d = 0;
    char tail = 0;
    if (std::sscanf(t.c_str() + 6, "%d-%d/%d-%d%c", &a, &b, &c, &d, &tail) != 4) {
      throw ParseError(fmt::format("protocol '{}': expected range:A-B/C-D", text));
    }
    p.train_range = {a, b};
    p.test_range = {c, d};
  } else if (t.rfind("mre:", 0) == 0) {
    p.kind = Kind::mre_threshold;
    try {
      p.mre_threshold = std::stod(t.substr(4));
    } catch (const std::exception&) {
      throw ParseError(fmt::format("protocol '{}': expected mre:L", text));
    }
    if (!(p.mre_threshold >= 0.0)) throw ParseError("protocol mre threshold must be non-negative");
  } else {
    throw ParseError(fmt::format("unknown protocol '{}'", text));
  }
  return p;
}

std::string SplitProtocol::name() const {
  switch (kind) {
    case Kind::c1: return "C1";
    case Kind::c2: return "C2";
    case Kind::c3: return "C3";
    case Kind::c4_1: return "C4-1";
    case Kind::c4_2: return "C4-2";
    case Kind::index_range:
      return fmt::format("range:{}-{}/{}-{}", train_range.first, train_range.last, test_range.first,
                         test_range.last);
    case Kind::mre_threshold: return fmt::format("mre:{}", mre_threshold);
  }
  return "?";
}

namespace {

std::vector<SeerProject> take_range(std::span<const SeerProject> projects, IndexRange range,
                                    std::string_view what) {
  const int n = static_cast<int>(projects.size());
  if (range.first < 1 || range.last > n || range.first > range.last) {
    throw ProtocolError(fmt::format("{} range [{}, {}] does not fit a dataset of {} projects", what,
                                    range.first, range.last, n));
  }
  return {projects.begin() + (range.first - 1), projects.begin() + range.last};
}

}  // namespace

Split split(std::span<const SeerProject> projects, const SplitProtocol& protocol,
            const ValueTable& baseline) {
  using Kind = SplitProtocol::Kind;
  const int n = static_cast<int>(projects.size());
  Split out;
  switch (protocol.kind) {
    case Kind::c2:
      out.training.assign(projects.begin(), projects.end());
      out.testing.assign(projects.begin(), projects.end());
      break;
    case Kind::c1:
    case Kind::c3:
    case Kind::mre_threshold:
      for (const SeerProject& p : projects) {
        const double mre = std::abs(estimate_effort(p, baseline) - p.actual_effort) / p.actual_effort;
        if (mre <= protocol.mre_threshold) out.training.push_back(p);
      }
      out.testing.assign(projects.begin(), projects.end());
      break;
    case Kind::c4_1:
      out.training = take_range(projects, {24, n}, "training");
      out.testing = take_range(projects, {1, 23}, "testing");
      break;
    case Kind::c4_2:
      out.training = take_range(projects, {47, n}, "training");
      out.testing = take_range(projects, {1, 46}, "testing");
      break;
    case Kind::index_range:
      out.training = take_range(projects, protocol.train_range, "training");
      out.testing = take_range(projects, protocol.test_range, "testing");
      break;
  }
  if (out.training.empty()) {
    throw ProtocolError(fmt::format("protocol {} leaves an empty training set", protocol.name()));
  }
  return out;
}

}  // namespace seernf
