#include "seernf/experiment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

double relative_error(double estimated, double actual) {
  if (!(actual > 0.0)) throw DomainError(fmt::format("actual effort {} must be positive", actual));
  return (estimated - actual) / actual;
}

double mmre(std::span<const EffortPair> pairs) {
  if (pairs.empty()) throw DomainError("MMRE of an empty list");
  double sum = 0.0;
  for (const EffortPair& p : pairs) sum += std::abs(relative_error(p.estimated, p.actual));
  return sum / static_cast<double>(pairs.size());
}

double pred(std::span<const EffortPair> pairs, double level) {
  if (pairs.empty()) throw DomainError("PRED of an empty list");
  if (!(level >= 0.0)) throw DomainError(fmt::format("PRED level {} must be non-negative", level));
  std::size_t hits = 0;
  for (const EffortPair& p : pairs) {
    if (std::abs(relative_error(p.estimated, p.actual)) <= level) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

EvaluationReport evaluate(std::span<const SeerProject> projects, const ValueTable& table,
                          const EvaluationOptions& options) {
  EvaluationReport report;
  report.outlier_threshold = options.outlier_threshold;
  std::vector<EffortPair> pairs;
  for (const SeerProject& p : projects) {
    ProjectResult r;
    r.id = p.id;
    r.actual = p.actual_effort;
    r.estimated = estimate_effort(p, table);
    r.re = relative_error(r.estimated, r.actual);
    r.mre = std::abs(r.re);
    if (r.mre > options.outlier_threshold) report.outliers.push_back(r.id);
    pairs.push_back({r.estimated, r.actual});
    report.projects.push_back(std::move(r));
  }
  report.mmre = mmre(pairs);
  for (double level : options.pred_levels) report.pred[level] = pred(pairs, level);
  return report;
}

ReportChange change(const EvaluationReport& baseline, const EvaluationReport& calibrated) {
  ReportChange d;
  d.mmre = calibrated.mmre - baseline.mmre;
  for (const auto& [level, value] : calibrated.pred) {
    if (auto it = baseline.pred.find(level); it != baseline.pred.end()) d.pred[level] = value - it->second;
  }
  d.outliers = static_cast<int>(calibrated.outliers.size()) - static_cast<int>(baseline.outliers.size());
  return d;
}

CaseResult run_case(std::span<const SeerProject> projects, const ValueTable& table,
                    const SplitProtocol& protocol, const CalibrationConfig& config,
                    const std::vector<SeerProject>* industrial, const EvaluationOptions& options) {
  const Split parts = split(projects, protocol, table);
  CaseResult result;
  result.protocol = protocol.name();
  for (const SeerProject& p : parts.training) result.training_ids.push_back(p.id);
  result.trace = train(parts.training, table, config);

  auto compare = [&](std::string name, std::span<const SeerProject> set) {
    Comparison c;
    c.name = std::move(name);
    c.baseline = evaluate(set, table, options);
    c.calibrated = evaluate(set, result.trace.table, options);
    c.delta = change(c.baseline, c.calibrated);
    return c;
  };
  result.comparisons.push_back(compare("published", parts.testing));
  if (industrial && !industrial->empty()) {
    result.comparisons.push_back(compare("industrial", *industrial));
  }
  return result;
}

// --------------------------------------------------------------- rendering

std::string percent(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

namespace {

std::string level_name(double level) { return fmt::format("PRED({:g}%)", level * 100.0); }

std::string signed_percent(double fraction) {
  const double v = fraction * 100.0;
  // Avoid printing "-0.00" for tiny negative noise.
  if (std::abs(v) < 0.005) return "0.00";
  return fmt::format("{:.2f}", v);
}

}  // namespace

std::string report_csv(const EvaluationReport& report, double months_per_year) {
  std::string out = "id,estimated_py,actual_py,estimated_pm,actual_pm,re,mre\n";
  for (const ProjectResult& r : report.projects) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.id, format_number(r.estimated),
                       format_number(r.actual), format_number(r.estimated * months_per_year),
                       format_number(r.actual * months_per_year), format_number(r.re),
                       format_number(r.mre));
  }
  return out;
}

std::string comparison_text(const Comparison& c) {
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"Metric", "Baseline", "Calibrated", "Change"});
  rows.push_back({"MMRE", percent(c.baseline.mmre), percent(c.calibrated.mmre), signed_percent(c.delta.mmre)});
  for (const auto& [level, value] : c.baseline.pred) {
    const double cal = c.calibrated.pred.at(level);
    rows.push_back({level_name(level), percent(value), percent(cal), signed_percent(c.delta.pred.at(level))});
  }
  rows.push_back({fmt::format("# of Outliers (MRE > {:g}%)", c.baseline.outlier_threshold * 100.0),
                  fmt::format("{}", c.baseline.outliers.size()),
                  fmt::format("{}", c.calibrated.outliers.size()), fmt::format("{}", c.delta.outliers)});
  std::array<std::size_t, 4> width{};
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out = fmt::format("{} ({} projects)\n", c.name, c.baseline.projects.size());
  for (const auto& row : rows) {
    out += fmt::format("{:<{}}  {:>{}}  {:>{}}  {:>{}}\n", row[0], width[0], row[1], width[1], row[2],
                       width[2], row[3], width[3]);
  }
  return out;
}

std::string comparison_csv(const Comparison& c) {
  std::string out = "metric,baseline,calibrated,change\n";
  out += fmt::format("MMRE,{},{},{}\n", percent(c.baseline.mmre), percent(c.calibrated.mmre),
                     signed_percent(c.delta.mmre));
  for (const auto& [level, value] : c.baseline.pred) {
    out += fmt::format("{},{},{},{}\n", level_name(level), percent(value),
                       percent(c.calibrated.pred.at(level)), signed_percent(c.delta.pred.at(level)));
  }
  out += fmt::format("outliers,{},{},{}\n", c.baseline.outliers.size(), c.calibrated.outliers.size(),
                     c.delta.outliers);
  return out;
}

json report_json(const EvaluationReport& report) {
  json doc;
  doc["mmre"] = report.mmre;
  json pred = json::object();
  for (const auto& [level, value] : report.pred) pred[fmt::format("{:g}", level)] = value;
  doc["pred"] = std::move(pred);
  doc["outlier_threshold"] = report.outlier_threshold;
  doc["outliers"] = report.outliers;
  json projects = json::array();
  for (const ProjectResult& r : report.projects) {
    projects.push_back({{"id", r.id}, {"estimated_py", r.estimated}, {"actual_py", r.actual},
                        {"re", r.re}, {"mre", r.mre}});
  }
  doc["projects"] = std::move(projects);
  return doc;
}

json comparison_json(const Comparison& c) {
  json doc;
  doc["name"] = c.name;
  doc["baseline"] = report_json(c.baseline);
  doc["calibrated"] = report_json(c.calibrated);
  json delta;
  delta["mmre"] = c.delta.mmre;
  json pred = json::object();
  for (const auto& [level, value] : c.delta.pred) pred[fmt::format("{:g}", level)] = value;
  delta["pred"] = std::move(pred);
  delta["outliers"] = c.delta.outliers;
  doc["change"] = std::move(delta);
  return doc;
}

std::string trace_csv(const TrainingTrace& trace) {
  std::string out = "epoch,loss,learning_rate,projections,floor_activations\n";
  out += fmt::format("0,{},,,\n", format_number(trace.initial_loss));
  for (std::size_t e = 0; e < trace.losses.size(); ++e) {
    out += fmt::format("{},{},{},{},{}\n", e + 1, format_number(trace.losses[e]),
                       format_number(trace.learning_rates[e]), trace.projections[e],
                       trace.floor_activations[e]);
  }
  return out;
}

json case_json(const CaseResult& result) {
  json doc;
  doc["protocol"] = result.protocol;
  doc["training_ids"] = result.training_ids;
  json comparisons = json::array();
  for (const Comparison& c : result.comparisons) comparisons.push_back(comparison_json(c));
  doc["comparisons"] = std::move(comparisons);
  json trace;
  trace["epochs"] = result.trace.epochs();
  trace["initial_loss"] = result.trace.initial_loss;
  trace["final_loss"] = result.trace.final_loss();
  trace["halvings"] = result.trace.halvings;
  trace["stop_reason"] = result.trace.stop_reason;
  doc["training"] = std::move(trace);
  return doc;
}

}  // namespace seernf
