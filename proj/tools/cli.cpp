#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "seernf/calibration.hpp"
#include "seernf/dataset.hpp"
#include "seernf/engine.hpp"
#include "seernf/errors.hpp"
#include "seernf/experiment.hpp"
#include "seernf/io.hpp"
#include "seernf/nf_bank.hpp"
#include "seernf/synthetic.hpp"
#include "seernf/version.hpp"

namespace seernf::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kOutputDirEnv = "SEERNF_OUTPUT_DIR";
constexpr std::string_view kPresetPrefix = "preset:";

// ------------------------------------------------------------------ settings

struct Settings {
  CalibrationConfig calibration;
  EvaluationOptions evaluation;
  std::string protocol = "c2";
  double months_per_year = 12.0;
};

void apply_config(Settings& s, const json& doc) {
  if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "learning_rate" || key == "alpha") {
        s.calibration.learning_rate = value.get<double>();
      } else if (key == "max_epochs" || key == "epochs") {
        s.calibration.max_epochs = value.get<int>();
      } else if (key == "tolerance") {
        s.calibration.tolerance = value.get<double>();
      } else if (key == "constraint_policy" || key == "policy") {
        s.calibration.constraint_policy = parse_constraint_policy(value.get<std::string>());
      } else if (key == "seed") {
        s.calibration.seed = value.get<std::uint64_t>();
      } else if (key == "value_floor") {
        s.calibration.value_floor = value.get<double>();
      } else if (key == "halve_on_increase") {
        s.calibration.halve_on_increase = value.get<bool>();
      } else if (key == "max_halvings") {
        s.calibration.max_halvings = value.get<int>();
      } else if (key == "protocol") {
        s.protocol = value.get<std::string>();
      } else if (key == "outlier_threshold") {
        s.evaluation.outlier_threshold = value.get<double>();
      } else if (key == "pred_levels") {
        s.evaluation.pred_levels = value.get<std::vector<double>>();
      } else if (key == "months_per_year") {
        s.months_per_year = value.get<double>();
      } else {
        throw ValidationError(fmt::format("config: unknown key '{}'", key));
      }
    } catch (const json::exception&) {
      throw ValidationError(fmt::format("config: key '{}' has the wrong type", key));
    }
  }
}

json settings_json(const Settings& s) {
  json doc;
  doc["learning_rate"] = s.calibration.learning_rate;
  doc["max_epochs"] = s.calibration.max_epochs;
  doc["tolerance"] = s.calibration.tolerance;
  doc["constraint_policy"] = std::string(to_string(s.calibration.constraint_policy));
  doc["seed"] = s.calibration.seed;
  doc["value_floor"] = s.calibration.value_floor;
  doc["halve_on_increase"] = s.calibration.halve_on_increase;
  doc["max_halvings"] = s.calibration.max_halvings;
  doc["protocol"] = s.protocol;
  doc["outlier_threshold"] = s.evaluation.outlier_threshold;
  doc["pred_levels"] = s.evaluation.pred_levels;
  doc["months_per_year"] = s.months_per_year;
  return doc;
}

void check_settings(const Settings& s) {
  s.calibration.validate();
  if (!(s.months_per_year > 0.0)) throw ValidationError("months per year must be positive");
  if (!(s.evaluation.outlier_threshold >= 0.0)) throw ValidationError("outlier threshold must be non-negative");
  for (double level : s.evaluation.pred_levels) {
    if (!(level >= 0.0)) throw ValidationError(fmt::format("PRED level {} must be non-negative", level));
  }
}

/// Flags that feed Settings. Options and the config file are applied in the
/// order they appear on the command line, so whichever comes last wins.
class SettingFlags {
 public:
  void add_config(CLI::App* app) {
    bind(app->add_option("--config", config_path_, "JSON settings file (applied at its position)"),
         [this](Settings& s) { apply_config(s, json::parse(read_text_file(config_path_))); });
  }

  void add_training(CLI::App* app) {
    bind(app->add_option("--alpha,--learning-rate", alpha_, "learning rate (default 1e-3)"),
         [this](Settings& s) { s.calibration.learning_rate = alpha_; });
    bind(app->add_option("--epochs,--max-epochs", epochs_, "maximum epochs (default 500)"),
         [this](Settings& s) { s.calibration.max_epochs = epochs_; });
    bind(app->add_option("--tolerance", tolerance_, "relative loss decrease that ends training (default 1e-6)"),
         [this](Settings& s) { s.calibration.tolerance = tolerance_; });
    bind(app->add_option("--policy", policy_, "constraint policy: epoch or step"),
         [this](Settings& s) { s.calibration.constraint_policy = parse_constraint_policy(policy_); });
    bind(app->add_option("--seed", seed_, "seed recorded with the run"),
         [this](Settings& s) { s.calibration.seed = seed_; });
    bind(app->add_option("--value-floor", floor_, "smallest value an update may produce (default 1e-6)"),
         [this](Settings& s) { s.calibration.value_floor = floor_; });
    bind(app->add_option("--max-halvings", halvings_, "learning-rate halvings per epoch (default 40)"),
         [this](Settings& s) { s.calibration.max_halvings = halvings_; });
    bind(app->add_flag("--no-halving", no_halving_, "stop instead of halving the rate when the loss rises"),
         [this](Settings& s) { s.calibration.halve_on_increase = !no_halving_; });
  }

  void add_evaluation(CLI::App* app) {
    bind(app->add_option("--outlier-threshold", outlier_, "MRE above which a project is an outlier (default 0.5)"),
         [this](Settings& s) { s.evaluation.outlier_threshold = outlier_; });
    bind(app->add_option("--pred-level", pred_levels_, "PRED level as a fraction; repeatable")
             ->take_all(),
         [this](Settings& s) { s.evaluation.pred_levels = pred_levels_; });
    add_months(app);
  }

  void add_months(CLI::App* app) {
    bind(app->add_option("--months-per-year", months_, "months per person-year (default 12)"),
         [this](Settings& s) { s.months_per_year = months_; });
  }

  void add_protocol(CLI::App* app) {
    bind(app->add_option("--protocol", protocol_, "c1, c2, c3, c4-1, c4-2, range:A-B/C-D or mre:L"),
         [this](Settings& s) { s.protocol = protocol_; });
  }

  Settings resolve(const CLI::App& app) const {
    Settings s;
    const auto& order = app.parse_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (std::find(order.begin() + static_cast<std::ptrdiff_t>(i) + 1, order.end(), order[i]) != order.end()) {
        continue;
      }
      for (const auto& [option, apply] : appliers_) {
        if (option == order[i]) apply(s);
      }
    }
    check_settings(s);
    return s;
  }

 private:
  void bind(const CLI::Option* option, std::function<void(Settings&)> apply) {
    appliers_.emplace_back(option, std::move(apply));
  }

  std::string config_path_;
  double alpha_ = 0.0;
  int epochs_ = 0;
  double tolerance_ = 0.0;
  std::string policy_;
  std::uint64_t seed_ = 0;
  double floor_ = 0.0;
  int halvings_ = 0;
  bool no_halving_ = false;
  double outlier_ = 0.0;
  std::vector<double> pred_levels_;
  double months_ = 0.0;
  std::string protocol_;
  std::vector<std::pair<const CLI::Option*, std::function<void(Settings&)>>> appliers_;
};

// ------------------------------------------------------------------ manifest

std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("fnv1a64:{:016x}", h);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

/// One output-producing invocation. Outputs are buffered and written
/// together; the manifest goes last and records success or the failing stage.
class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, std::ostream& err)
      : command_(std::move(command)), args_(args), err_(err), started_(utc_now()) {}

  void stage(std::string name) { stage_ = std::move(name); }
  void input(const std::string& name, const std::string& path) { inputs_[name] = path; }
  void config(json doc) { config_ = std::move(doc); }
  std::string config_digest() const { return digest(config_.dump()); }
  void output(std::string name, std::string content) { outputs_.emplace_back(std::move(name), std::move(content)); }

  int commit(const fs::path& dir) {
    stage("write");
    std::vector<std::string> names;
    for (const auto& [name, content] : outputs_) {
      write_text_file(dir / name, content);
      names.push_back(name);
    }
    write_manifest(dir, "ok", names, nullptr);
    return kExitOk;
  }

  int fail(const std::exception& e, const std::optional<fs::path>& dir) {
    err_ << fmt::format("seernf {}: [{}] {}\n", command_, stage_, e.what());
    if (dir) {
      try {
        write_manifest(*dir, "failed", {}, &e);
      } catch (const std::exception& m) {
        err_ << fmt::format("seernf {}: could not write manifest: {}\n", command_, m.what());
      }
    }
    return exit_code_for(e);
  }

 private:
  void write_manifest(const fs::path& dir, std::string_view status, const std::vector<std::string>& names,
                      const std::exception* error) {
    json m;
    m["tool"] = "seernf";
    m["version"] = std::string(kVersion);
    m["command"] = command_;
    m["arguments"] = std::vector<std::string>(args_.begin() + (args_.empty() ? 0 : 1), args_.end());
    m["status"] = std::string(status);
    if (error) {
      m["stage"] = stage_;
      m["error"] = error->what();
    }
    m["inputs"] = inputs_;
    m["config"] = config_;
    m["config_digest"] = config_digest();
    m["outputs"] = names;
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
  }

  std::string command_;
  std::vector<std::string> args_;
  std::ostream& err_;
  std::string started_;
  std::string stage_ = "setup";
  json inputs_ = json::object();
  json config_ = json::object();
  std::vector<std::pair<std::string, std::string>> outputs_;
};

std::optional<fs::path> output_dir(const std::string& flag, bool required) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv(kOutputDirEnv.data()); env && *env) return fs::path(env);
  if (required) return fs::path("seernf-out");
  return std::nullopt;
}

// ------------------------------------------------------------------ inputs

ValueTable preset_table(std::string_view name) {
  if (name == "synthetic") return synthetic_table();
  if (name == "identity") return identity_table();
  throw ValidationError(fmt::format("unknown table preset '{}' (synthetic, identity)", name));
}

/// A table path or "preset:NAME". The table must pass validation.
ValueTable resolve_table(const std::string& table_ref) {
  ValueTable table = table_ref.rfind(kPresetPrefix, 0) == 0 ? preset_table(table_ref.substr(kPresetPrefix.size()))
                                                        : load_table(table_ref);
  const auto violations = validate_table(table);
  if (!violations.empty()) {
    std::string what = fmt::format("table {} is invalid: {}", table_ref, violations.front().describe());
    if (violations.size() > 1) what += fmt::format(" (and {} more)", violations.size() - 1);
    throw ValidationError(what);
  }
  return table;
}

std::vector<SeerProject> transfer_all(const std::vector<RawProjectRecord>& records, const MappingTable& mapping) {
  std::vector<SeerProject> projects;
  projects.reserve(records.size());
  for (const RawProjectRecord& r : records) projects.push_back(transfer(r, mapping));
  return projects;
}

// ------------------------------------------------------------------ rendering

std::string report_text(const std::string& name, const EvaluationReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("MMRE", percent(r.mmre));
  for (const auto& [level, value] : r.pred) {
    rows.emplace_back(fmt::format("PRED({:g}%)", level * 100.0), percent(value));
  }
  rows.emplace_back(fmt::format("# of Outliers (MRE > {:g}%)", r.outlier_threshold * 100.0),
                    fmt::format("{}", r.outliers.size()));
  std::size_t w0 = 0;
  std::size_t w1 = 0;
  for (const auto& [a, b] : rows) {
    w0 = std::max(w0, a.size());
    w1 = std::max(w1, b.size());
  }
  std::string out = fmt::format("{} ({} projects)\n", name, r.projects.size());
  for (const auto& [a, b] : rows) out += fmt::format("{:<{}}  {:>{}}\n", a, w0, b, w1);
  return out;
}

/// comparison_csv rows with a leading set column.
std::string summary_csv(const std::vector<Comparison>& comparisons) {
  std::string out = "set,metric,baseline,calibrated,change\n";
  for (const Comparison& c : comparisons) {
    const std::string body = comparison_csv(c);
    std::size_t pos = body.find('\n') + 1;
    while (pos < body.size()) {
      const std::size_t end = body.find('\n', pos);
      out += c.name + "," + body.substr(pos, end - pos + 1);
      pos = end + 1;
    }
  }
  return out;
}

EvaluationReport report_from_json(const json& doc) {
  EvaluationReport r;
  r.mmre = doc.at("mmre").get<double>();
  for (const auto& [level, value] : doc.at("pred").items()) r.pred[std::stod(level)] = value.get<double>();
  r.outlier_threshold = doc.at("outlier_threshold").get<double>();
  r.outliers = doc.at("outliers").get<std::vector<std::string>>();
  for (const json& p : doc.at("projects")) {
    r.projects.push_back({p.at("id").get<std::string>(), p.at("estimated_py").get<double>(),
                          p.at("actual_py").get<double>(), p.at("re").get<double>(), p.at("mre").get<double>()});
  }
  return r;
}

Comparison comparison_from_json(const json& doc) {
  Comparison c;
  c.name = doc.at("name").get<std::string>();
  c.baseline = report_from_json(doc.at("baseline"));
  c.calibrated = report_from_json(doc.at("calibrated"));
  c.delta = change(c.baseline, c.calibrated);
  return c;
}

std::string comparisons_text(const std::vector<Comparison>& comparisons) {
  std::string out;
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    if (i) out += "\n";
    out += comparison_text(comparisons[i]);
  }
  return out;
}

// ------------------------------------------------------------------ commands

struct EstimateArgs {
  std::string table;
  double size = 0.0;
  double sibr = 0.0;
  std::vector<std::string> ratings;
  bool as_json = false;
};

int cmd_estimate(const EstimateArgs& a, const Settings& settings, std::ostream& out) {
  const ValueTable table = resolve_table(a.table);
  SeerProject project;
  project.id = "estimate";
  project.size = a.size;
  project.sibr = a.sibr;
  for (const std::string& item : a.ratings) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("--rating '{}' is not SYMBOL=VALUE", item));
    const Param p = parse_param(item.substr(0, eq));
    if (!is_rated(p)) throw ValidationError(fmt::format("{} is not a rated parameter; use --sibr", symbol(p)));
    project.set_rating(p, parse_rating(item.substr(eq + 1)));
  }
  validate_project(project, false);

  const ParameterValues values = bank_translate(project, table);
  const EffortBreakdown b = compute_effort(project.size, values.at(Param::D), values, project.sibr);
  const double mpy = settings.months_per_year;
  if (a.as_json) {
    json doc;
    doc["size_sloc"] = project.size;
    doc["sibr"] = project.sibr;
    doc["d"] = values.at(Param::D);
    doc["ctbx"] = b.ctbx;
    doc["parm_adjustment"] = b.parm_adjustment;
    doc["c_tb"] = b.c_tb;
    doc["c_te"] = b.c_te;
    doc["k"] = b.k_lifecycle;
    doc["effort_py"] = b.effort;
    doc["effort_pm"] = b.effort * mpy;
    doc["months_per_year"] = mpy;
    out << doc.dump(2) << "\n";
  } else {
    const std::vector<std::pair<std::string_view, double>> rows = {
        {"size_sloc", project.size}, {"sibr", project.sibr},    {"D", values.at(Param::D)},
        {"ctbx", b.ctbx},            {"ParmAdjustment", b.parm_adjustment},
        {"C_tb", b.c_tb},            {"C_te", b.c_te},          {"K", b.k_lifecycle},
        {"effort_py", b.effort},     {"effort_pm", b.effort * mpy}};
    for (const auto& [name, value] : rows) out << fmt::format("{:<15} {}\n", name, format_number(value));
  }
  return kExitOk;
}

int cmd_validate_table(const std::string& table_ref, std::ostream& out, std::ostream& err) {
  const ValueTable table = table_ref.rfind(kPresetPrefix,
                                           0) == 0 ? preset_table(table_ref.substr(kPresetPrefix.size()))
                                                              : load_table(table_ref);
  const auto violations = validate_table(table);
  if (violations.empty()) {
    out << fmt::format("{}: valid ({} parameters x {} levels)\n", table_ref, kRatedCount, kRatingLevels);
    return kExitOk;
  }
  for (const Violation& v : violations) err << v.describe() << "\n";
  err << fmt::format("{}: {} violation(s)\n", table_ref, violations.size());
  return kExitInvalid;
}

struct TransferArgs {
  std::string dataset;
  std::string mapping;
  std::string format = "json";
  std::string out;
};

int cmd_transfer(const TransferArgs& a, const Settings& s, Run& run, std::ostream& out) {
  run.input("dataset", a.dataset);
  run.input("mapping", a.mapping);
  run.config(settings_json(s));
  run.stage("load");
  if (a.format != "json" && a.format != "csv") throw ValidationError("--format must be json or csv");
  const MappingTable mapping = load_mapping(a.mapping);
  const auto records = load_dataset(a.dataset, s.months_per_year);
  run.stage("transfer");
  const auto projects = transfer_all(records, mapping);
  if (a.format == "csv") {
    run.output("projects.csv", projects_to_csv(projects));
  } else {
    run.output("projects.json", projects_to_json(projects).dump(2) + "\n");
  }
  out << fmt::format("transferred {} projects\n", projects.size());
  return run.commit(*output_dir(a.out, true));
}

struct CalibrateArgs {
  std::string projects;
  std::string table;
  std::string out;
};

json table_provenance(const Run& run, const std::string& command, const std::string& base,
                      const TrainingTrace& trace, std::size_t training) {
  json p;
  p["generated_by"] = fmt::format("seernf {}", kVersion);
  p["command"] = command;
  p["base_table"] = base;
  p["training_projects"] = training;
  p["epochs"] = trace.epochs();
  p["initial_loss"] = trace.initial_loss;
  p["final_loss"] = trace.final_loss();
  p["stop_reason"] = trace.stop_reason;
  p["config_digest"] = run.config_digest();
  return p;
}

int cmd_calibrate(const CalibrateArgs& a, const Settings& s, Run& run, std::ostream& out) {
  run.input("projects", a.projects);
  run.input("table", a.table);
  run.config(settings_json(s));
  run.stage("load");
  const ValueTable table = resolve_table(a.table);
  const auto projects = load_projects(a.projects);
  run.stage("train");
  const TrainingTrace trace = train(projects, table, s.calibration);
  json provenance = table_provenance(run, "calibrate", a.table, trace, projects.size());
  provenance["projects"] = a.projects;
  run.output("calibrated_table.json", table_to_json(trace.table, provenance).dump(2) + "\n");
  run.output("trace.csv", trace_csv(trace));
  out << fmt::format("epochs {} ({}), loss {} -> {}\n", trace.epochs(), trace.stop_reason,
                     format_number(trace.initial_loss), format_number(trace.final_loss()));
  return run.commit(*output_dir(a.out, true));
}

struct EvaluateArgs {
  std::string projects;
  std::string table;
  std::string calibrated;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a, const Settings& s, Run& run, std::ostream& out) {
  const std::optional<fs::path> dir = output_dir(a.out, false);
  run.input("projects", a.projects);
  run.input("table", a.table);
  if (!a.calibrated.empty()) run.input("calibrated", a.calibrated);
  run.config(settings_json(s));
  run.stage("load");
  const ValueTable table = resolve_table(a.table);
  const auto projects = load_projects(a.projects);
  run.stage("evaluate");
  std::string text;
  json summary;
  if (a.calibrated.empty()) {
    const EvaluationReport r = evaluate(projects, table, s.evaluation);
    text = report_text("evaluation", r);
    summary = report_json(r);
    run.output("report.csv", report_csv(r, s.months_per_year));
  } else {
    const ValueTable calibrated = resolve_table(a.calibrated);
    Comparison c;
    c.name = "evaluation";
    c.baseline = evaluate(projects, table, s.evaluation);
    c.calibrated = evaluate(projects, calibrated, s.evaluation);
    c.delta = change(c.baseline, c.calibrated);
    text = comparison_text(c);
    summary = json{{"comparisons", json::array({comparison_json(c)})}};
    run.output("baseline_report.csv", report_csv(c.baseline, s.months_per_year));
    run.output("calibrated_report.csv", report_csv(c.calibrated, s.months_per_year));
    run.output("summary.csv", summary_csv({c}));
  }
  run.output("summary.txt", text);
  run.output("summary.json", summary.dump(2) + "\n");
  out << text;
  return dir ? run.commit(*dir) : kExitOk;
}

struct CaseArgs {
  std::string dataset;
  std::string mapping;
  std::string table;
  std::string industrial;
  std::string out;
};

int cmd_case(const CaseArgs& a, const Settings& s, Run& run, std::ostream& out) {
  run.input("dataset", a.dataset);
  run.input("mapping", a.mapping);
  run.input("table", a.table);
  if (!a.industrial.empty()) run.input("industrial", a.industrial);
  run.config(settings_json(s));

  run.stage("load");
  const ValueTable table = resolve_table(a.table);
  const MappingTable mapping = load_mapping(a.mapping);
  const auto records = load_dataset(a.dataset, s.months_per_year);
  std::vector<RawProjectRecord> industrial_records;
  if (!a.industrial.empty()) industrial_records = load_dataset(a.industrial, s.months_per_year);

  run.stage("transfer");
  const auto projects = transfer_all(records, mapping);
  const auto industrial = transfer_all(industrial_records, mapping);

  run.stage("split");
  const SplitProtocol protocol = SplitProtocol::parse(s.protocol);
  (void)split(projects, protocol, table);

  run.stage("train");
  const CaseResult result =
      run_case(projects, table, protocol, s.calibration, industrial.empty() ? nullptr : &industrial, s.evaluation);

  run.stage("report");
  for (const Comparison& c : result.comparisons) {
    const std::string prefix = c.name == "published" ? "" : c.name + "_";
    run.output(prefix + "baseline_report.csv", report_csv(c.baseline, s.months_per_year));
    run.output(prefix + "calibrated_report.csv", report_csv(c.calibrated, s.months_per_year));
  }
  const TrainingTrace& trace = result.trace;
  const std::string text =
      fmt::format("protocol {}: trained on {} projects, {} epochs ({}), loss {} -> {}\n\n", result.protocol,
                  result.training_ids.size(), trace.epochs(), trace.stop_reason,
                  format_number(trace.initial_loss), format_number(trace.final_loss())) +
      comparisons_text(result.comparisons);
  run.output("summary.txt", text);
  run.output("summary.csv", summary_csv(result.comparisons));
  run.output("summary.json", case_json(result).dump(2) + "\n");
  run.output("trace.csv", trace_csv(trace));
  json provenance = table_provenance(run, "case", a.table, trace, result.training_ids.size());
  provenance["dataset"] = a.dataset;
  provenance["mapping"] = a.mapping;
  provenance["protocol"] = result.protocol;
  run.output("calibrated_table.json", table_to_json(trace.table, provenance).dump(2) + "\n");
  out << text;
  return run.commit(*output_dir(a.out, true));
}

int cmd_report(const std::string& path, const std::string& format, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
  try {
    std::vector<Comparison> comparisons;
    if (doc.contains("comparisons")) {
      for (const json& c : doc.at("comparisons")) comparisons.push_back(comparison_from_json(c));
    } else {
      const EvaluationReport r = report_from_json(doc);
      if (format == "csv") {
        out << report_csv(r);
      } else {
        out << report_text("evaluation", r);
      }
      return kExitOk;
    }
    if (format == "csv") {
      out << summary_csv(comparisons);
    } else {
      out << comparisons_text(comparisons);
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: not a summary file ({})", path, e.what()));
  }
  return kExitOk;
}

struct MakeTableArgs {
  std::string preset = "synthetic";
  double perturb = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_make_table(const MakeTableArgs& a, Run& run, std::ostream& out) {
  run.config(json{{"preset", a.preset}, {"perturb", a.perturb}, {"seed", a.seed}});
  run.stage("build");
  if (!(a.perturb >= 0.0 && a.perturb < 1.0)) throw ValidationError("--perturb must lie in [0, 1)");
  ValueTable table = preset_table(a.preset);
  json provenance = {{"generated_by", fmt::format("seernf {}", kVersion)}, {"preset", a.preset}};
  if (a.perturb > 0.0) {
    SyntheticRng rng(a.seed);
    table = perturb_table(table, a.perturb, rng);
    provenance["perturb"] = a.perturb;
    provenance["seed"] = a.seed;
  }
  run.output("table.json", table_to_json(table, provenance).dump(2) + "\n");
  out << fmt::format("table: {}\n", table.label());
  return run.commit(*output_dir(a.out, true));
}

struct SynthArgs {
  std::string table = "preset:synthetic";
  std::string mapping;
  std::string model = "COCOMO81";
  int count = 93;
  double noise = 0.05;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_synth(const SynthArgs& a, Run& run, std::ostream& out) {
  run.input("table", a.table);
  run.input("mapping", a.mapping);
  run.config(json{{"model", a.model}, {"count", a.count}, {"noise", a.noise}, {"seed", a.seed}});
  run.stage("load");
  const ValueTable table = resolve_table(a.table);
  const MappingTable mapping = load_mapping(a.mapping);
  run.stage("generate");
  if (a.count < 1) throw ValidationError("--count must be positive");
  if (!(a.noise >= 0.0 && a.noise < 1.0)) throw ValidationError("--noise must lie in [0, 1)");
  SyntheticRng rng(a.seed);
  const SourceModel model = parse_source_model(a.model);
  run.output("dataset.csv", synthesize_dataset_csv(table, mapping, model, a.count, a.noise, rng));
  out << fmt::format("synthesized {} {} projects\n", a.count, to_string(model));
  return run.commit(*output_dir(a.out, true));
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitMissingFile;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const MappingError*>(&e) ||
      dynamic_cast<const RangeError*>(&e) || dynamic_cast<const ProtocolError*>(&e) ||
      dynamic_cast<const LookupError*>(&e) || dynamic_cast<const json::exception*>(&e)) {
    return kExitInvalid;
  }
  return kExitFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SEER-SEM effort estimation and neuro-fuzzy table calibration", "seernf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  const char* table_help = "value table JSON, or preset:synthetic / preset:identity";

  EstimateArgs est;
  SettingFlags est_flags;
  CLI::App* estimate = app.add_subcommand("estimate", "estimate effort for one project");
  estimate->add_option("--table", est.table, table_help)->required();
  estimate->add_option("--size", est.size, "size in SLOC")->required();
  estimate->add_option("--sibr", est.sibr, "fraction of size that is reused (0..1)");
  estimate->add_option("--rating", est.ratings, "SYMBOL=VALUE, a label (Hi+) or coordinate (11.5); repeatable")
      ->take_all();
  estimate->add_flag("--json", est.as_json, "print JSON");
  est_flags.add_months(estimate);

  std::string validate_spec;
  CLI::App* validate = app.add_subcommand("validate-table", "check positivity and monotonicity of a table");
  validate->add_option("table", validate_spec, table_help)->required();

  TransferArgs tr;
  SettingFlags tr_flags;
  CLI::App* transfer_cmd = app.add_subcommand("transfer", "convert a COCOMO dataset into SEER-SEM projects");
  transfer_cmd->add_option("--dataset", tr.dataset, "dataset CSV")->required();
  transfer_cmd->add_option("--mapping", tr.mapping, "mapping JSON")->required();
  transfer_cmd->add_option("--format", tr.format, "json or csv");
  transfer_cmd->add_option("--out", tr.out, "output directory");
  tr_flags.add_months(transfer_cmd);

  CalibrateArgs cal;
  SettingFlags cal_flags;
  CLI::App* calibrate = app.add_subcommand("calibrate", "train a table on every project in a file");
  calibrate->add_option("--projects", cal.projects, "projects JSON or CSV")->required();
  calibrate->add_option("--table", cal.table, table_help)->required();
  calibrate->add_option("--out", cal.out, "output directory");
  cal_flags.add_config(calibrate);
  cal_flags.add_training(calibrate);

  EvaluateArgs ev;
  SettingFlags ev_flags;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "MMRE, PRED and outliers of a table on a project file");
  evaluate_cmd->add_option("--projects", ev.projects, "projects JSON or CSV")->required();
  evaluate_cmd->add_option("--table", ev.table, table_help)->required();
  evaluate_cmd->add_option("--calibrated", ev.calibrated, "second table to compare against --table");
  evaluate_cmd->add_option("--out", ev.out, "output directory (reports are only printed without one)");
  ev_flags.add_config(evaluate_cmd);
  ev_flags.add_evaluation(evaluate_cmd);

  CaseArgs cs;
  SettingFlags cs_flags;
  CLI::App* case_cmd = app.add_subcommand("case", "transfer, split, train and evaluate in one run");
  case_cmd->add_option("--dataset", cs.dataset, "dataset CSV")->required();
  case_cmd->add_option("--mapping", cs.mapping, "mapping JSON")->required();
  case_cmd->add_option("--table", cs.table, table_help)->required();
  case_cmd->add_option("--industrial", cs.industrial, "additional dataset CSV evaluated with both tables");
  case_cmd->add_option("--out", cs.out, "output directory");
  cs_flags.add_config(case_cmd);
  cs_flags.add_protocol(case_cmd);
  cs_flags.add_training(case_cmd);
  cs_flags.add_evaluation(case_cmd);

  std::string report_path;
  std::string report_format = "text";
  CLI::App* report = app.add_subcommand("report", "render a summary.json written by case or evaluate");
  report->add_option("summary", report_path, "summary.json")->required();
  report->add_option("--format", report_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  MakeTableArgs mk;
  CLI::App* make_table = app.add_subcommand("make-table", "write a built-in table, optionally perturbed");
  make_table->add_option("--preset", mk.preset, "synthetic or identity");
  make_table->add_option("--perturb", mk.perturb, "multiplicative noise amplitude, re-monotonised");
  make_table->add_option("--seed", mk.seed, "perturbation seed");
  make_table->add_option("--out", mk.out, "output directory");

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand("synth", "generate a COCOMO-style dataset from a table");
  synth->add_option("--table", sy.table, table_help);
  synth->add_option("--mapping", sy.mapping, "mapping JSON")->required();
  synth->add_option("--model", sy.model, "COCOMO81 or COCOMO87");
  synth->add_option("--count", sy.count, "number of projects");
  synth->add_option("--noise", sy.noise, "effort noise amplitude");
  synth->add_option("--seed", sy.seed, "generator seed");
  synth->add_option("--out", sy.out, "output directory");

  std::vector<char*> argv;
  std::vector<std::string> storage = args.empty() ? std::vector<std::string>{"seernf"} : args;
  for (std::string& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto guarded = [&](const std::string& command, auto&& body) -> int {
    try {
      return body();
    } catch (const std::exception& e) {
      err << fmt::format("seernf {}: {}\n", command, e.what());
      return exit_code_for(e);
    }
  };

  // Commands that write files route failures through Run so the output
  // directory always receives a manifest.
  auto with_run = [&](const std::string& command, const std::string& out_flag, bool needs_dir, auto&& body) -> int {
    Run r(command, args, err);
    const std::optional<fs::path> dir = output_dir(out_flag, needs_dir);
    try {
      return body(r);
    } catch (const std::exception& e) {
      return r.fail(e, dir);
    }
  };

  if (estimate->parsed()) {
    return guarded("estimate", [&] { return cmd_estimate(est, est_flags.resolve(*estimate), out); });
  }
  if (validate->parsed()) {
    return guarded("validate-table", [&] { return cmd_validate_table(validate_spec, out, err); });
  }
  if (transfer_cmd->parsed()) {
    return with_run("transfer", tr.out, true,
                    [&](Run& r) { return cmd_transfer(tr, tr_flags.resolve(*transfer_cmd), r, out); });
  }
  if (calibrate->parsed()) {
    return with_run("calibrate", cal.out, true,
                    [&](Run& r) { return cmd_calibrate(cal, cal_flags.resolve(*calibrate), r, out); });
  }
  if (evaluate_cmd->parsed()) {
    return with_run("evaluate", ev.out, false,
                    [&](Run& r) { return cmd_evaluate(ev, ev_flags.resolve(*evaluate_cmd), r, out); });
  }
  if (case_cmd->parsed()) {
    return with_run("case", cs.out, true, [&](Run& r) { return cmd_case(cs, cs_flags.resolve(*case_cmd), r, out); });
  }
  if (report->parsed()) {
    return guarded("report", [&] { return cmd_report(report_path, report_format, out); });
  }
  if (make_table->parsed()) {
    return with_run("make-table", mk.out, true, [&](Run& r) { return cmd_make_table(mk, r, out); });
  }
  if (synth->parsed()) {
    return with_run("synth", sy.out, true, [&](Run& r) { return cmd_synth(sy, r, out); });
  }
  return kExitUsage;
}

}  // namespace seernf::cli
