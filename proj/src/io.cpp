#include "seernf/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

std::string format_number(double v) { return fmt::format("{}", v); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

// ---------------------------------------------------------------- tables

json table_to_json(const ValueTable& table, const json& provenance, const IndexMap& indices) {
  json doc;
  doc["format"] = kTableFormat;
  if (!table.label().empty()) doc["label"] = table.label();
  if (!provenance.is_null()) doc["provenance"] = provenance;
  json params = json::array();
  for (Param p : rated_params()) {
    json entry;
    entry["symbol"] = symbol(p);
    entry["index"] = indices.index(p);
    entry["direction"] = to_string(table.direction(p));
    entry["values"] = table.row(p);
    params.push_back(std::move(entry));
  }
  doc["parameters"] = std::move(params);
  return doc;
}

ValueTable table_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("parameters") || !doc["parameters"].is_array()) {
    throw ParseError("value table: missing 'parameters' array");
  }
  if (doc.contains("format") && doc["format"] != kTableFormat) {
    throw ParseError(fmt::format("value table: unsupported format {}", doc["format"].dump()));
  }
  ValueTable table;
  std::set<Param> seen;
  for (const json& entry : doc["parameters"]) {
    if (!entry.is_object() || !entry.contains("symbol") || !entry["symbol"].is_string()) {
      throw ParseError("value table: parameter entry without 'symbol'");
    }
    const std::string sym = entry["symbol"].get<std::string>();
    const Param p = parse_param(sym);
    if (!is_rated(p)) throw ParseError("value table: SIBR has no value row");
    if (!seen.insert(p).second) throw ParseError(fmt::format("value table: duplicate {}", sym));
    if (!entry.contains("direction") || !entry["direction"].is_string()) {
      throw ParseError(fmt::format("value table: {} has no direction", sym));
    }
    table.set_direction(p, parse_direction(entry["direction"].get<std::string>()));
    if (!entry.contains("values") || !entry["values"].is_array()) {
      throw ParseError(fmt::format("value table: {} has no values", sym));
    }
    const json& values = entry["values"];
    if (values.size() != static_cast<std::size_t>(kRatingLevels)) {
      throw ParseError(fmt::format("value table: {} has {} levels, expected {}", sym,
                                   values.size(), kRatingLevels));
    }
    Row row{};
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (!values[r].is_number()) {
        throw ParseError(fmt::format("value table: {} level {} is not a number", sym, r + 1));
      }
      row[r] = values[r].get<double>();
    }
    table.set_row(p, row);
  }
  for (Param p : rated_params()) {
    if (!seen.count(p)) throw ParseError(fmt::format("value table: missing parameter {}", symbol(p)));
  }
  table.set_label(doc.value("label", std::string{}));
  return table;
}

ValueTable load_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("table not found: {}", path.string()));
  }
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return table_from_json(doc);
}

void save_table(const std::filesystem::path& path, const ValueTable& table, const json& provenance) {
  write_text_file(path, table_to_json(table, provenance).dump(2) + "\n");
}

// -------------------------------------------------------------- projects

namespace {

double rating_from_json(const json& v, Param p) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
      throw RangeError(fmt::format("{} rating {} outside [1, 18]", symbol(p), x));
    }
    return x;
  }
  if (v.is_string()) return parse_rating(v.get<std::string>());
  throw ParseError(fmt::format("{} rating must be a number or label", symbol(p)));
}

double number_field(const json& obj, const char* key, double fallback, bool required) {
  if (!obj.contains(key)) {
    if (required) throw ParseError(fmt::format("project entry missing '{}'", key));
    return fallback;
  }
  if (!obj[key].is_number()) throw ParseError(fmt::format("project field '{}' must be numeric", key));
  return obj[key].get<double>();
}

double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("{}: '{}' is not a number", what, text));
  }
}

}  // namespace

json projects_to_json(const std::vector<SeerProject>& projects) {
  json list = json::array();
  for (const SeerProject& p : projects) {
    json entry;
    entry["id"] = p.id;
    entry["size_sloc"] = p.size;
    entry["effort_py"] = p.actual_effort;
    entry["sibr"] = p.sibr;
    entry["weight"] = p.weight;
    json ratings = json::object();
    for (Param q : rated_params()) ratings[std::string(symbol(q))] = p.rating(q);
    entry["ratings"] = std::move(ratings);
    list.push_back(std::move(entry));
  }
  json doc;
  doc["format"] = kProjectsFormat;
  doc["projects"] = std::move(list);
  return doc;
}

std::vector<SeerProject> projects_from_json(const json& doc) {
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("projects")) throw ParseError("projects file: missing 'projects' array");
    list = &doc["projects"];
  }
  if (!list->is_array()) throw ParseError("projects file: 'projects' must be an array");
  std::vector<SeerProject> out;
  for (const json& entry : *list) {
    if (!entry.is_object()) throw ParseError("projects file: entry must be an object");
    SeerProject p;
    p.id = entry.value("id", fmt::format("P{}", out.size() + 1));
    p.size = number_field(entry, "size_sloc", 0.0, true);
    p.actual_effort = number_field(entry, "effort_py", 0.0, false);
    p.sibr = number_field(entry, "sibr", 0.0, false);
    p.weight = number_field(entry, "weight", 1.0, false);
    if (entry.contains("ratings")) {
      for (const auto& [key, value] : entry["ratings"].items()) {
        const Param q = parse_param(key);
        p.set_rating(q, rating_from_json(value, q));
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string projects_to_csv(const std::vector<SeerProject>& projects) {
  std::string out = "id,size_sloc,effort_py,sibr,weight";
  for (Param p : rated_params()) {
    out += ',';
    out += symbol(p);
  }
  out += '\n';
  for (const SeerProject& p : projects) {
    out += fmt::format("{},{},{},{},{}", p.id, format_number(p.size), format_number(p.actual_effort),
                       format_number(p.sibr), format_number(p.weight));
    for (Param q : rated_params()) {
      out += ',';
      out += format_number(p.rating(q));
    }
    out += '\n';
  }
  return out;
}

std::vector<SeerProject> projects_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("projects CSV: empty file");
  const std::vector<std::string> header = split_csv_line(line);
  std::vector<std::optional<Param>> columns(header.size());
  int id_col = -1, size_col = -1, effort_col = -1, sibr_col = -1, weight_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c];
    const int col = static_cast<int>(c);
    if (h == "id") id_col = col;
    else if (h == "size_sloc") size_col = col;
    else if (h == "effort_py") effort_col = col;
    else if (h == "sibr") sibr_col = col;
    else if (h == "weight") weight_col = col;
    else columns[c] = parse_param(h);
  }
  if (size_col < 0) throw ParseError("projects CSV: missing 'size_sloc' column");

  std::vector<SeerProject> out;
  int row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("projects CSV row {}: {} fields, expected {}", row_number,
                                   fields.size(), header.size()));
    }
    const std::string where = fmt::format("projects CSV row {}", row_number);
    SeerProject p;
    p.id = id_col >= 0 ? fields[static_cast<std::size_t>(id_col)] : fmt::format("P{}", out.size() + 1);
    p.size = parse_double(fields[static_cast<std::size_t>(size_col)], where);
    if (effort_col >= 0) p.actual_effort = parse_double(fields[static_cast<std::size_t>(effort_col)], where);
    if (sibr_col >= 0) p.sibr = parse_double(fields[static_cast<std::size_t>(sibr_col)], where);
    if (weight_col >= 0) p.weight = parse_double(fields[static_cast<std::size_t>(weight_col)], where);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (columns[c] && !fields[c].empty()) p.set_rating(*columns[c], parse_rating(fields[c]));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SeerProject> load_projects(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError(fmt::format("projects file not found: {}", path.string()));
  }
  const std::string text = read_text_file(path);
  if (path.extension() == ".csv") return projects_from_csv(text);
  try {
    return projects_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void save_projects(const std::filesystem::path& path, const std::vector<SeerProject>& projects) {
  if (path.extension() == ".csv") {
    write_text_file(path, projects_to_csv(projects));
  } else {
    write_text_file(path, projects_to_json(projects).dump(2) + "\n");
  }
}

}  // namespace seernf
