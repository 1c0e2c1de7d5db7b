#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seernf/errors.hpp"
#include "seernf/parameters.hpp"
#include "seernf/project.hpp"
#include "seernf/value_table.hpp"

namespace seernf {

/// How the monotone repair is scheduled. Descent is full-batch, so an epoch
/// is exactly one update step and both policies project every accepted
/// update before its loss is recorded.
enum class ConstraintPolicy { project_each_epoch, project_each_step };

std::string_view to_string(ConstraintPolicy policy);
ConstraintPolicy parse_constraint_policy(std::string_view text);

struct CalibrationConfig {
  double learning_rate = 1e-3;
  int max_epochs = 500;
  // Stop once the relative loss decrease of an epoch falls below this.
  double tolerance = 1e-6;
  ConstraintPolicy constraint_policy = ConstraintPolicy::project_each_epoch;
  std::uint64_t seed = 0;
  // Updated values below this floor are clamped to keep the table positive.
  double value_floor = 1e-6;
  // Retry an epoch with half the learning rate when its loss would rise.
  bool halve_on_increase = true;
  int max_halvings = 40;

  /// Throws ValidationError on a negative rate, epoch count or tolerance.
  void validate() const;
};

struct TrainingTrace {
  double initial_loss = 0.0;
  std::vector<double> losses;             // loss after each accepted epoch
  std::vector<double> learning_rates;     // rate used by each accepted epoch
  std::vector<int> projections;           // rows changed by the monotone repair
  std::vector<int> floor_activations;     // entries clamped to the floor
  int halvings = 0;
  std::string stop_reason;
  ValueTable table;

  int epochs() const { return static_cast<int>(losses.size()); }
  double final_loss() const { return losses.empty() ? initial_loss : losses.back(); }
};

/// Raised when the loss becomes non-finite; carries the last valid trace.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, TrainingTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const TrainingTrace& trace() const { return trace_; }

 private:
  TrainingTrace trace_;
};

/// Estimated effort (person-years) of a project under a table.
double estimate_effort(const SeerProject& project, const ValueTable& table);

/// ½ Σ_n w_n ((E_en − E_acn)/E_acn)². Throws DomainError when an actual
/// effort is not positive.
double loss(std::span<const SeerProject> projects, const ValueTable& table);

/// Analytic ∂E/∂P_i for every rated parameter, evaluated at the values the
/// bank assigns to `project`.
std::array<double, kRatedCount> effort_sensitivities(const SeerProject& project,
                                                     const ValueTable& table);

/// ∂E_en/∂P_i for one rated parameter.
double grad_effort_wrt_value(const SeerProject& project, const ValueTable& table, Param p);

/// ∂E_en/∂P_ir, i.e. ∂E_en/∂P_i · μ_r(x_i).
double grad_effort_wrt_consequent(const SeerProject& project, const ValueTable& table, Param p,
                                  int level);

/// ∂loss/∂P_ir for one table entry.
double grad_loss_wrt_consequent(std::span<const SeerProject> projects, const ValueTable& table,
                                Param p, int level);

using TableGradient = std::array<Row, kRatedCount>;

/// ∂loss/∂P_ir for every entry in one pass over the projects.
TableGradient loss_gradient(std::span<const SeerProject> projects, const ValueTable& table);

/// Least-squares isotonic fit (pool adjacent violators) of `values` in the
/// given direction. Already-monotone input is returned unchanged.
std::vector<double> isotonic_fit(std::span<const double> values, Direction direction);

Row enforce_monotone(const Row& row, Direction direction);

/// Full-batch gradient descent on the table consequents. The returned
/// trace's table always passes validate_table.
TrainingTrace train(std::span<const SeerProject> projects, const ValueTable& table,
                    const CalibrationConfig& config);

}  // namespace seernf
