#include "seernf/value_table.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seernf/engine.hpp"

namespace seernf {

ValueTable::ValueTable() {
  for (auto& row : rows_) row.fill(1.0);
  directions_.fill(Direction::increasing);
}

ValueTable::ValueTable(std::array<Row, kRatedCount> rows,
                       std::array<Direction, kRatedCount> directions, std::string label)
    : rows_(rows), directions_(directions), label_(std::move(label)) {}

std::string Violation::describe() const {
  if (kind == Kind::positivity) {
    return fmt::format("{}: value {} at level {} ({}) is not positive", symbol(param), value_a,
                       level_a, rating_level(level_a).label);
  }
  return fmt::format("{}: levels ({},{}) values {} > {} break the declared direction", symbol(param),
                     level_a, level_b, value_a, value_b);
}

bool is_monotone(const Row& row, Direction direction) {
  for (std::size_t r = 1; r < row.size(); ++r) {
    if (direction == Direction::increasing ? row[r] < row[r - 1] : row[r] > row[r - 1]) {
      return false;
    }
  }
  return true;
}

std::vector<Violation> validate_table(const ValueTable& table) {
  std::vector<Violation> out;
  for (Param p : rated_params()) {
    const Row& row = table.row(p);
    for (int r = 1; r <= kRatingLevels; ++r) {
      const double v = row[static_cast<std::size_t>(r - 1)];
      if (!(v > 0.0) || !std::isfinite(v)) {
        out.push_back({Violation::Kind::positivity, p, r, r, v, v});
      }
    }
    const bool increasing = table.direction(p) == Direction::increasing;
    for (int r = 1; r < kRatingLevels; ++r) {
      const double lo = row[static_cast<std::size_t>(r - 1)];
      const double hi = row[static_cast<std::size_t>(r)];
      if (increasing ? hi < lo : hi > lo) {
        // value_a is always the larger of the offending pair.
        out.push_back({Violation::Kind::monotonicity, p, r, r + 1, increasing ? lo : hi,
                       increasing ? hi : lo});
      }
    }
  }
  return out;
}

namespace {

struct Ramp {
  Param param;
  Direction direction;
  double nominal;
  double step;  // ratio between adjacent levels, > 1
};

Row geometric_row(const Ramp& ramp) {
  Row row{};
  for (int r = 1; r <= kRatingLevels; ++r) {
    const double offset = static_cast<double>(r) - kNominalCoordinate;
    const double exponent = ramp.direction == Direction::increasing ? offset : -offset;
    row[static_cast<std::size_t>(r - 1)] = ramp.nominal * std::pow(ramp.step, exponent);
  }
  // Keep the Nominal entry exact.
  row[static_cast<std::size_t>(kNominalCoordinate) - 1] = ramp.nominal;
  return row;
}

}  // namespace

ValueTable synthetic_table() {
  constexpr auto inc = Direction::increasing;
  constexpr auto dec = Direction::decreasing;
  const double aexp_nom = 1.0;
  const double appl_nom = 1.0;
  const double acap_nom = 4.11 / compute_combined(Combined::AEXPAPPL, aexp_nom, appl_nom);

  const std::array<Ramp, kRatedCount> ramps = {{
      {Param::ACAP, dec, acap_nom, 1.04}, {Param::AEXP, inc, aexp_nom, 1.08},
      {Param::PCAP, dec, 1.0, 1.04},      {Param::LEXP, inc, 1.0, 1.08},
      {Param::DEXP, inc, 1.0, 1.08},      {Param::TEXP, inc, 1.0, 1.08},
      {Param::PEXP, inc, 1.0, 1.08},      {Param::MODP, dec, 1.0, 1.03},
      {Param::TOOL, dec, 1.0, 1.03},      {Param::TURN, inc, 1.0, 1.02},
      {Param::TERM, inc, 1.0, 1.02},      {Param::MULT, inc, 1.0, 1.03},
      {Param::RDED, inc, 1.0, 1.03},      {Param::RLOC, inc, 1.0, 1.03},
      {Param::DSVL, inc, 1.0, 1.03},      {Param::PSVL, inc, 1.0, 1.03},
      {Param::RVOL, inc, 1.0, 1.03},      {Param::SPEC, inc, 1.0, 1.03},
      {Param::TEST, inc, 1.0, 1.03},      {Param::QUAL, inc, 1.0, 1.03},
      {Param::RHST, inc, 1.0, 1.03},      {Param::REUS, inc, 1.0, 1.05},
      {Param::LANG, inc, 3.0, 1.05},      {Param::DSY, inc, 1.0, 1.05},
      {Param::APPL, inc, appl_nom, 1.05}, {Param::PSYS, inc, 1.0, 1.05},
      {Param::DISP, inc, 1.0, 1.03},      {Param::MEMC, inc, 1.0, 1.03},
      {Param::TIMC, inc, 1.0, 1.03},      {Param::RTIM, inc, 1.0, 1.03},
      {Param::TSYS, inc, 1.0, 1.05},      {Param::TSVL, inc, 1.0, 1.03},
      {Param::SECR, inc, 1.0, 1.03},      {Param::D, inc, 10.0, 1.04},
  }};

  ValueTable table;
  for (const Ramp& ramp : ramps) {
    table.set_row(ramp.param, geometric_row(ramp));
    table.set_direction(ramp.param, ramp.direction);
  }
  table.set_label("SYNTHETIC geometric-ramp default (not calibrated)");
  return table;
}

ValueTable identity_table() {
  ValueTable table = synthetic_table();  // keeps the declared directions
  auto constant = [&table](Param p, double v) {
    Row row{};
    row.fill(v);
    table.set_row(p, row);
  };
  for (Param p : rated_params()) constant(p, 1.0);
  // Experience far beyond the exponential decay of the combined factors
  // drives LANGLEXP, TSYSTEXP, DSYSDEXP to exactly 1 and AEXPAPPL to 0.82.
  constexpr double saturated = 1000.0;
  constant(Param::AEXP, saturated);
  constant(Param::ACAP, 4.11 / 0.82);
  constant(Param::LEXP, saturated);
  constant(Param::LANG, 3.0);
  constant(Param::TEXP, saturated);
  constant(Param::DEXP, saturated);
  // 0.91 + 0.23·exp(-3·PEXP) = 1 at PSYS = 1.
  constant(Param::PEXP, std::log(0.23 / 0.09) / 3.0);
  table.set_label("SYNTHETIC identity (all multipliers one)");
  return table;
}

}  // namespace seernf
