#include "seernf/rating.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

namespace {

// U+2212 MINUS SIGN, as it appears in typeset rating tables.
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

std::string normalize_label(std::string_view label) {
  std::string out(label);
  if (out.size() >= kUnicodeMinus.size() &&
      std::string_view(out).substr(out.size() - kUnicodeMinus.size()) == kUnicodeMinus) {
    out.resize(out.size() - kUnicodeMinus.size());
    out.push_back('-');
  }
  return out;
}

}  // namespace

RatingLevel rating_level(int grid) {
  if (grid < 1 || grid > kRatingLevels) {
    throw RangeError(fmt::format("rating grid {} outside [1, {}]", grid, kRatingLevels));
  }
  return {kRatingLabels[static_cast<std::size_t>(grid - 1)], grid};
}

double rating_to_coordinate(std::string_view label) {
  const std::string key = normalize_label(label);
  for (std::size_t i = 0; i < kRatingLabels.size(); ++i) {
    if (kRatingLabels[i] == key) return static_cast<double>(i + 1);
  }
  throw ParseError(fmt::format("unknown rating label '{}'", label));
}

std::string_view coordinate_to_rating(double x) {
  if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
    throw RangeError(fmt::format("rating coordinate {} outside [1, 18]", x));
  }
  const int grid = static_cast<int>(std::ceil(x - 0.5));
  return rating_level(grid).label;
}

double parse_rating(std::string_view token) {
  if (token.empty()) throw ParseError("empty rating");
  const char first = token.front();
  if ((first >= '0' && first <= '9') || first == '.' || first == '-' || first == '+') {
    double x = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, x);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(fmt::format("unknown rating label '{}'", token));
    }
    if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
      throw RangeError(fmt::format("rating coordinate {} outside [1, 18]", x));
    }
    return x;
  }
  return rating_to_coordinate(token);
}

}  // namespace seernf
