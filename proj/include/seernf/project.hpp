#pragma once

#include <array>
#include <string>

#include "seernf/parameters.hpp"
#include "seernf/rating.hpp"

namespace seernf {

/// One historical project in SEER-SEM terms. Ratings are stored as grid
/// coordinates so linguistic and continuous inputs share a representation;
/// unrated parameters default to Nominal.
struct SeerProject {
  std::string id;
  double size = 0.0;           // effective size, SLOC
  double actual_effort = 0.0;  // person-years
  double sibr = 0.0;           // fraction in [0, 1]
  double weight = 1.0;
  std::array<double, kRatedCount> ratings = nominal_ratings();

  double rating(Param p) const { return ratings[static_cast<std::size_t>(slot_of(p))]; }
  /// Throws RangeError when x is outside [1, 18].
  void set_rating(Param p, double x);

  bool operator==(const SeerProject&) const = default;

  static constexpr std::array<double, kRatedCount> nominal_ratings() {
    std::array<double, kRatedCount> r{};
    for (auto& x : r) x = kNominalCoordinate;
    return r;
  }
};

/// Throws ValidationError describing the first broken invariant. When
/// `require_effort` is false, a zero actual effort is accepted (estimation
/// inputs carry no actual).
void validate_project(const SeerProject& project, bool require_effort = true);

}  // namespace seernf
