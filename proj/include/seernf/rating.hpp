#pragma once

#include <array>
#include <string_view>

namespace seernf {

inline constexpr int kRatingLevels = 18;
inline constexpr double kMinCoordinate = 1.0;
inline constexpr double kMaxCoordinate = 18.0;
inline constexpr double kNominalCoordinate = 8.0;

/// The 18 linguistic rating labels, lowest first. Grid position r is the
/// 1-based index into this array.
inline constexpr std::array<std::string_view, kRatingLevels> kRatingLabels = {
    "VLo-", "VLo", "VLo+", "Low-", "Low", "Low+", "Nom-", "Nom", "Nom+",
    "Hi-",  "Hi",  "Hi+",  "VHi-", "VHi", "VHi+", "EHi-", "EHi", "EHi+"};

struct RatingLevel {
  std::string_view label;
  int grid = 0;
};

/// Level at grid position `grid` (1..18). Throws RangeError otherwise.
RatingLevel rating_level(int grid);

/// Grid coordinate of a linguistic label. Accepts ASCII '-' or the Unicode
/// minus sign for the minus sub-level. Throws ParseError naming the token.
double rating_to_coordinate(std::string_view label);

/// Label whose grid point is nearest to `x`; an exact half rounds down.
/// Throws RangeError when x is outside [1, 18].
std::string_view coordinate_to_rating(double x);

/// Parses either a label ("Hi+") or a numeric coordinate ("11.5").
/// Numeric values must lie in [1, 18].
double parse_rating(std::string_view token);

}  // namespace seernf
