#include "seernf/project.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

void SeerProject::set_rating(Param p, double x) {
  if (!is_rated(p)) throw RangeError("SIBR is entered as a fraction, not a rating");
  if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
    throw RangeError(fmt::format("{} rating {} outside [1, 18]", symbol(p), x));
  }
  ratings[static_cast<std::size_t>(slot_of(p))] = x;
}

void validate_project(const SeerProject& project, bool require_effort) {
  const auto fail = [&](const std::string& what) {
    throw ValidationError(fmt::format("project '{}': {}", project.id, what));
  };
  if (!(project.size > 0.0) || !std::isfinite(project.size)) {
    fail(fmt::format("size {} must be positive", project.size));
  }
  if (require_effort ? !(project.actual_effort > 0.0) : !(project.actual_effort >= 0.0)) {
    fail(fmt::format("actual effort {} must be positive", project.actual_effort));
  }
  if (!(project.sibr >= 0.0 && project.sibr <= 1.0)) {
    fail(fmt::format("SIBR {} outside [0, 1]", project.sibr));
  }
  if (!(project.weight >= 0.0) || !std::isfinite(project.weight)) {
    fail(fmt::format("weight {} must be non-negative", project.weight));
  }
  for (Param p : rated_params()) {
    const double x = project.rating(p);
    if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
      fail(fmt::format("{} rating {} outside [1, 18]", symbol(p), x));
    }
  }
}

}  // namespace seernf
