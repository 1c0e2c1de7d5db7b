#include "seernf/calibration.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "seernf/engine.hpp"
#include "seernf/nf_bank.hpp"

namespace seernf {

std::string_view to_string(ConstraintPolicy policy) {
  return policy == ConstraintPolicy::project_each_epoch ? "project_each_epoch"
                                                        : "project_each_step";
}

ConstraintPolicy parse_constraint_policy(std::string_view text) {
  if (text == "project_each_epoch" || text == "epoch") return ConstraintPolicy::project_each_epoch;
  if (text == "project_each_step" || text == "step") return ConstraintPolicy::project_each_step;
  throw ParseError(fmt::format("unknown constraint policy '{}'", text));
}

void CalibrationConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError(fmt::format("learning rate {} must be non-negative", learning_rate));
  }
  if (max_epochs < 0) throw ValidationError("max_epochs must be non-negative");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be non-negative");
  if (!(value_floor > 0.0)) throw ValidationError("value floor must be positive");
  if (max_halvings < 0) throw ValidationError("max_halvings must be non-negative");
}

double estimate_effort(const SeerProject& project, const ValueTable& table) {
  const ParameterValues values = bank_translate(project, table);
  return compute_effort(project.size, values.at(Param::D), values, project.sibr).effort;
}

double loss(std::span<const SeerProject> projects, const ValueTable& table) {
  double total = 0.0;
  for (const SeerProject& p : projects) {
    if (!(p.actual_effort > 0.0)) {
      throw DomainError(fmt::format("project '{}': actual effort must be positive", p.id));
    }
    const double rel = (estimate_effort(p, table) - p.actual_effort) / p.actual_effort;
    total += p.weight * rel * rel;
  }
  return 0.5 * total;
}

namespace {

struct Sensitivity {
  double effort = 0.0;
  std::array<double, kRatedCount> d_effort{};
};

Sensitivity sensitivity_at(const SeerProject& project, const ParameterValues& v) {
  Sensitivity s;
  const EffortBreakdown b = compute_effort(project.size, v.at(Param::D), v, project.sibr);
  const double e = b.effort;
  s.effort = e;
  auto set = [&s](Param p, double g) { s.d_effort[static_cast<std::size_t>(slot_of(p))] = g; };

  // ctbx enters through C_tb: ∂lnE/∂ln(ctbx) = 1.2·3.70945/(5·TURN).
  const double turn = v.at(Param::TURN);
  const double ctbx_elasticity = kSizeExponent * kTechnologySlope / (5.0 * turn);
  for (Param p : {Param::ACAP, Param::MODP, Param::PCAP, Param::TOOL, Param::TERM}) {
    set(p, e * ctbx_elasticity / v.at(p));
  }
  {
    const double aexp = v.at(Param::AEXP);
    const double appl = v.at(Param::APPL);
    const double decay = 0.47 * 0.95977 * std::exp(-0.95977 * aexp / appl);
    const double f = compute_combined(Combined::AEXPAPPL, aexp, appl);
    set(Param::AEXP, e * ctbx_elasticity * (-decay / appl) / f);
    set(Param::APPL, e * ctbx_elasticity * (decay * aexp / (appl * appl)) / f);
  }
  set(Param::TURN, -e * kSizeExponent * kTechnologySlope * std::log(b.ctbx / kCtbxReference) /
                       (5.0 * turn * turn));

  set(Param::D, e * kStaffingExponent / v.at(Param::D));

  // Everything in ParmAdjustment has ∂lnE/∂ln(factor) = 1.2.
  const double pa_scale = e * kSizeExponent;
  for (Param p : {Param::MULT, Param::RDED, Param::RLOC, Param::DSVL, Param::PSVL, Param::RVOL,
                  Param::SPEC, Param::TEST, Param::QUAL, Param::RHST, Param::DISP, Param::MEMC,
                  Param::TIMC, Param::RTIM, Param::SECR, Param::TSVL}) {
    set(p, pa_scale / v.at(p));
  }

  // 1 + A(sys)·exp(-3·exp/sys) shared by LANGLEXP, TSYSTEXP and DSYSDEXP.
  auto experience_pair = [&](Param sys, Param exp_param, double base, double slope) {
    const double a = v.at(sys);
    const double x = v.at(exp_param);
    const double decay = std::exp(-3.0 * x / a);
    const double amplitude = base + slope * a;
    const double f = 1.0 + amplitude * decay;
    set(sys, pa_scale * (slope * decay + amplitude * decay * 3.0 * x / (a * a)) / f);
    set(exp_param, pa_scale * (-amplitude * decay * 3.0 / a) / f);
  };
  experience_pair(Param::LANG, Param::LEXP, 0.11, 0.085);
  experience_pair(Param::TSYS, Param::TEXP, 0.035, 0.025);
  experience_pair(Param::DSY, Param::DEXP, 0.06, 0.05);

  {
    const double psys = v.at(Param::PSYS);
    const double pexp = v.at(Param::PEXP);
    if (psys == 0.0) {
      set(Param::PSYS, 0.0);
      set(Param::PEXP, 0.0);
    } else {
      const double decay = std::exp(-3.0 * pexp / psys);
      const double pow091 = std::pow(0.91, psys);
      const double g = pow091 + 0.23 * psys * decay;
      const double dg_dpsys = std::log(0.91) * pow091 + 0.23 * decay * (1.0 + 3.0 * pexp / psys);
      const double dg_dpexp = -0.69 * decay;
      set(Param::PSYS, pa_scale * 0.833 * dg_dpsys / g);
      set(Param::PEXP, pa_scale * 0.833 * dg_dpexp / g);
    }
  }
  {
    const double reus = v.at(Param::REUS);
    set(Param::REUS, pa_scale * project.sibr / (project.sibr * reus + 1.0));
  }
  return s;
}

}  // namespace

std::array<double, kRatedCount> effort_sensitivities(const SeerProject& project,
                                                     const ValueTable& table) {
  return sensitivity_at(project, bank_translate(project, table)).d_effort;
}

double grad_effort_wrt_value(const SeerProject& project, const ValueTable& table, Param p) {
  if (!is_rated(p)) throw RangeError("SIBR has no trainable value");
  return effort_sensitivities(project, table)[static_cast<std::size_t>(slot_of(p))];
}

double grad_effort_wrt_consequent(const SeerProject& project, const ValueTable& table, Param p,
                                  int level) {
  return grad_effort_wrt_value(project, table, p) * membership(level, project.rating(p));
}

TableGradient loss_gradient(std::span<const SeerProject> projects, const ValueTable& table) {
  TableGradient grad{};
  for (const SeerProject& project : projects) {
    if (!(project.actual_effort > 0.0)) {
      throw DomainError(fmt::format("project '{}': actual effort must be positive", project.id));
    }
    const Sensitivity s = sensitivity_at(project, bank_translate(project, table));
    const double coef =
        project.weight * (s.effort - project.actual_effort) / (project.actual_effort * project.actual_effort);
    for (Param p : rated_params()) {
      const auto slot = static_cast<std::size_t>(slot_of(p));
      const LevelVector mu = firing_strengths(project.rating(p));
      for (std::size_t r = 0; r < mu.size(); ++r) {
        if (mu[r] != 0.0) grad[slot][r] += coef * s.d_effort[slot] * mu[r];
      }
    }
  }
  return grad;
}

double grad_loss_wrt_consequent(std::span<const SeerProject> projects, const ValueTable& table,
                                Param p, int level) {
  if (!is_rated(p)) throw RangeError("SIBR has no trainable value");
  rating_level(level);  // range check
  double sum = 0.0;
  for (const SeerProject& project : projects) {
    if (!(project.actual_effort > 0.0)) {
      throw DomainError(fmt::format("project '{}': actual effort must be positive", project.id));
    }
    const double mu = membership(level, project.rating(p));
    if (mu == 0.0) continue;
    const Sensitivity s = sensitivity_at(project, bank_translate(project, table));
    sum += project.weight / (project.actual_effort * project.actual_effort) *
           (s.effort - project.actual_effort) * s.d_effort[static_cast<std::size_t>(slot_of(p))] *
           mu;
  }
  return sum;
}

std::vector<double> isotonic_fit(std::span<const double> values, Direction direction) {
  // Pool adjacent violators for a non-decreasing fit; a decreasing fit is the
  // same problem on the negated sequence.
  const double sign = direction == Direction::increasing ? 1.0 : -1.0;
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({sign * v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  std::size_t pos = 0;
  for (const Block& b : blocks) {
    if (b.count == 1) {
      out.push_back(values[pos]);
    } else {
      const double level = sign * b.mean();
      out.insert(out.end(), b.count, level);
    }
    pos += b.count;
  }
  return out;
}

Row enforce_monotone(const Row& row, Direction direction) {
  const std::vector<double> fit = isotonic_fit(row, direction);
  Row out{};
  std::copy(fit.begin(), fit.end(), out.begin());
  return out;
}

namespace {

struct Step {
  ValueTable table;
  int projections = 0;
  int floor_activations = 0;
};

Step take_step(const ValueTable& current, const TableGradient& grad, double alpha, double floor) {
  Step step{current};
  if (alpha == 0.0) return step;
  for (Param p : rated_params()) {
    const auto slot = static_cast<std::size_t>(slot_of(p));
    Row row = current.row(p);
    for (std::size_t r = 0; r < row.size(); ++r) {
      const double old = row[r];
      double updated = old - alpha * grad[slot][r];
      if (updated < floor && updated < old) {
        updated = std::min(old, floor);
        ++step.floor_activations;
      }
      row[r] = updated;
    }
    const Row repaired = enforce_monotone(row, current.direction(p));
    if (repaired != row) ++step.projections;
    step.table.set_row(p, repaired);
  }
  return step;
}

double loss_or_infinity(std::span<const SeerProject> projects, const ValueTable& table) {
  try {
    const double l = loss(projects, table);
    return std::isfinite(l) ? l : std::numeric_limits<double>::infinity();
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

TrainingTrace train(std::span<const SeerProject> projects, const ValueTable& table,
                    const CalibrationConfig& config) {
  config.validate();
  if (projects.empty()) throw ValidationError("training set is empty");
  if (const auto violations = validate_table(table); !violations.empty()) {
    throw ValidationError("initial table is invalid: " + violations.front().describe());
  }
  for (const SeerProject& p : projects) validate_project(p);

  TrainingTrace trace;
  trace.table = table;
  trace.initial_loss = loss(projects, table);
  if (!std::isfinite(trace.initial_loss)) {
    throw TrainingError("initial loss is not finite", trace);
  }

  double alpha = config.learning_rate;
  double current_loss = trace.initial_loss;
  trace.stop_reason = "max_epochs";
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const TableGradient grad = loss_gradient(projects, trace.table);
    Step step = take_step(trace.table, grad, alpha, config.value_floor);
    double step_loss = loss_or_infinity(projects, step.table);
    int halvings = 0;
    while (config.halve_on_increase && !(step_loss <= current_loss) &&
           halvings < config.max_halvings) {
      alpha *= 0.5;
      ++halvings;
      step = take_step(trace.table, grad, alpha, config.value_floor);
      step_loss = loss_or_infinity(projects, step.table);
    }
    trace.halvings += halvings;
    if (!std::isfinite(step_loss)) {
      throw TrainingError(fmt::format("loss diverged at epoch {}", epoch), trace);
    }
    if (config.halve_on_increase && step_loss > current_loss) {
      trace.stop_reason = "step_size_exhausted";
      break;
    }

    trace.table = std::move(step.table);
    trace.losses.push_back(step_loss);
    trace.learning_rates.push_back(alpha);
    trace.projections.push_back(step.projections);
    trace.floor_activations.push_back(step.floor_activations);

    const double decrease =
        current_loss > 0.0 ? (current_loss - step_loss) / current_loss : 0.0;
    current_loss = step_loss;
    if (current_loss == 0.0 || decrease < config.tolerance) {
      trace.stop_reason = "converged";
      break;
    }
  }
  return trace;
}

}  // namespace seernf
