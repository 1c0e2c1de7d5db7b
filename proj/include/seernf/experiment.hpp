#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seernf/calibration.hpp"
#include "seernf/dataset.hpp"
#include "seernf/io.hpp"

namespace seernf {

struct EffortPair {
  double estimated = 0.0;
  double actual = 0.0;
};

/// (est − act)/act. Throws DomainError when act <= 0.
double relative_error(double estimated, double actual);

/// Mean of |RE|. Throws DomainError for an empty list.
double mmre(std::span<const EffortPair> pairs);

/// Fraction of pairs with MRE <= level (inclusive). Throws DomainError for
/// an empty list or a negative level.
double pred(std::span<const EffortPair> pairs, double level);

struct EvaluationOptions {
  std::vector<double> pred_levels = {0.20, 0.30, 0.50, 1.00};
  double outlier_threshold = 0.50;
};

struct ProjectResult {
  std::string id;
  double estimated = 0.0;
  double actual = 0.0;
  double re = 0.0;
  double mre = 0.0;
};

struct EvaluationReport {
  std::vector<ProjectResult> projects;
  double mmre = 0.0;
  std::map<double, double> pred;  // level -> fraction
  double outlier_threshold = 0.5;
  std::vector<std::string> outliers;  // ids with MRE > threshold
};

EvaluationReport evaluate(std::span<const SeerProject> projects, const ValueTable& table,
                          const EvaluationOptions& options = {});

/// Calibrated − baseline for every aggregate metric.
struct ReportChange {
  double mmre = 0.0;
  std::map<double, double> pred;
  int outliers = 0;
};

ReportChange change(const EvaluationReport& baseline, const EvaluationReport& calibrated);

struct Comparison {
  std::string name;
  EvaluationReport baseline;
  EvaluationReport calibrated;
  ReportChange delta;
};

struct CaseResult {
  std::string protocol;
  std::vector<std::string> training_ids;
  std::vector<Comparison> comparisons;  // "published" then optional "industrial"
  TrainingTrace trace;
};

/// Split → train → evaluate both tables on the testing list and, when
/// given, on a separate industrial set.
CaseResult run_case(std::span<const SeerProject> projects, const ValueTable& table,
                    const SplitProtocol& protocol, const CalibrationConfig& config,
                    const std::vector<SeerProject>* industrial = nullptr,
                    const EvaluationOptions& options = {});

// Rendering. Percentages carry two decimals; JSON keeps full precision.

std::string percent(double fraction);
std::string report_csv(const EvaluationReport& report, double months_per_year = 12.0);
std::string comparison_text(const Comparison& comparison);
std::string comparison_csv(const Comparison& comparison);
json report_json(const EvaluationReport& report);
json comparison_json(const Comparison& comparison);
std::string trace_csv(const TrainingTrace& trace);
json case_json(const CaseResult& result);

}  // namespace seernf
