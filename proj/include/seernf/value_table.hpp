#pragma once

#include <array>
#include <string>
#include <vector>

#include "seernf/parameters.hpp"
#include "seernf/rating.hpp"

namespace seernf {

/// One parameter's consequent values P_i1..P_i18, lowest rating first.
using Row = std::array<double, kRatingLevels>;

/// The trainable 34×18 matrix of parameter values together with each
/// row's declared monotone direction. Levels are 1-based in the accessors.
class ValueTable {
 public:
  ValueTable();
  ValueTable(std::array<Row, kRatedCount> rows, std::array<Direction, kRatedCount> directions,
             std::string label = {});

  const Row& row(Param p) const { return rows_[static_cast<std::size_t>(slot_of(p))]; }
  void set_row(Param p, const Row& values) { rows_[static_cast<std::size_t>(slot_of(p))] = values; }

  double value(Param p, int level) const { return row(p)[static_cast<std::size_t>(level - 1)]; }
  void set_value(Param p, int level, double v) {
    rows_[static_cast<std::size_t>(slot_of(p))][static_cast<std::size_t>(level - 1)] = v;
  }

  Direction direction(Param p) const { return directions_[static_cast<std::size_t>(slot_of(p))]; }
  void set_direction(Param p, Direction d) { directions_[static_cast<std::size_t>(slot_of(p))] = d; }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool operator==(const ValueTable&) const = default;

 private:
  std::array<Row, kRatedCount> rows_{};
  std::array<Direction, kRatedCount> directions_{};
  std::string label_;
};

struct Violation {
  enum class Kind { positivity, monotonicity };

  Kind kind = Kind::positivity;
  Param param = Param::ACAP;
  // For positivity both levels are the offending level.
  int level_a = 0;
  int level_b = 0;
  double value_a = 0.0;
  double value_b = 0.0;

  std::string describe() const;
};

/// Every positivity and adjacent-level monotonicity breach in the table.
/// Empty exactly when the table satisfies its invariants.
std::vector<Violation> validate_table(const ValueTable& table);

/// True when `row` is (non-strictly) monotone in `direction`.
bool is_monotone(const Row& row, Direction direction);

/// Synthetic default table: a geometric ramp per parameter with the Nominal
/// column chosen so that ctbx = 4.11 there. Not calibrated against any real
/// project data.
ValueTable synthetic_table();

/// Synthetic table whose rows are constant and chosen so that every combined
/// factor and multiplier is one and ctbx = 4.11 at every level; effort then
/// reduces to 0.393469·D^0.4·(Size/2000)^1.2 with D = 1.
ValueTable identity_table();

}  // namespace seernf
