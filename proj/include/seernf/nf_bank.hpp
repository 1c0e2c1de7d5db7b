#pragma once

#include <array>

#include "seernf/parameters.hpp"
#include "seernf/project.hpp"
#include "seernf/value_table.hpp"

namespace seernf {

/// Per-rule vector over the 18 rating levels (index 0 is level 1).
using LevelVector = std::array<double, kRatingLevels>;

/// Triangular membership grade of level `r` (1..18) at `x`, base width 2
/// centred on r. Defined for x in [0, 19]; throws RangeError otherwise.
double membership(int r, double x);

/// Firing strength of each single-antecedent rule; equals the membership
/// grade. Restricted to x in [1, 18], where the grades sum to one.
LevelVector firing_strengths(double x);

/// Divides by the sum of strengths. Throws DegenerateInputError when no
/// component is positive.
LevelVector normalize(const LevelVector& w);

/// Output of one sub-model: Σ_r w̄_r·row[r], i.e. linear interpolation of the
/// row at coordinate x.
double nf_output(double x, const Row& row);

/// Translates every rated coordinate of `project` through its sub-model and
/// passes SIBR through unchanged.
ParameterValues bank_translate(const SeerProject& project, const ValueTable& table);

}  // namespace seernf
