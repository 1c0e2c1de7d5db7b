#include "seernf/nf_bank.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

double membership(int r, double x) {
  if (r < 1 || r > kRatingLevels) {
    throw RangeError(fmt::format("membership level {} outside [1, 18]", r));
  }
  if (!(x >= 0.0 && x <= 19.0)) {
    throw RangeError(fmt::format("membership input {} outside [0, 19]", x));
  }
  const double center = static_cast<double>(r);
  if (x >= center - 1.0 && x <= center) return x - (center - 1.0);
  if (x > center && x <= center + 1.0) return (center + 1.0) - x;
  return 0.0;
}

LevelVector firing_strengths(double x) {
  if (!(x >= kMinCoordinate && x <= kMaxCoordinate)) {
    throw RangeError(fmt::format("rating coordinate {} outside [1, 18]", x));
  }
  LevelVector w{};
  // Only the two triangles around x can be non-zero.
  const int lo = static_cast<int>(std::floor(x));
  for (int r = std::max(1, lo); r <= std::min(kRatingLevels, lo + 1); ++r) {
    w[static_cast<std::size_t>(r - 1)] = membership(r, x);
  }
  return w;
}

LevelVector normalize(const LevelVector& w) {
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) throw DegenerateInputError("firing strengths sum to zero");
  LevelVector out{};
  for (std::size_t r = 0; r < w.size(); ++r) out[r] = w[r] / total;
  return out;
}

double nf_output(double x, const Row& row) {
  const LevelVector w = normalize(firing_strengths(x));
  double sum = 0.0;
  for (std::size_t r = 0; r < w.size(); ++r) {
    if (w[r] != 0.0) sum += w[r] * row[r];
  }
  return sum;
}

ParameterValues bank_translate(const SeerProject& project, const ValueTable& table) {
  ParameterValues values;
  for (Param p : rated_params()) values.set(p, nf_output(project.rating(p), table.row(p)));
  values.set(Param::SIBR, project.sibr);
  return values;
}

}  // namespace seernf
