#include "seernf/synthetic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seernf/calibration.hpp"
#include "seernf/io.hpp"

namespace seernf {

ValueTable perturb_table(const ValueTable& table, double amplitude, SyntheticRng& rng) {
  ValueTable out = table;
  for (Param p : rated_params()) {
    Row row = table.row(p);
    for (double& v : row) v *= rng.uniform(1.0 - amplitude, 1.0 + amplitude);
    out.set_row(p, enforce_monotone(row, table.direction(p)));
  }
  return out;
}

std::vector<SeerProject> synthesize_projects(const ValueTable& truth,
                                             const SyntheticProjectOptions& options,
                                             SyntheticRng& rng) {
  std::vector<SeerProject> out;
  out.reserve(static_cast<std::size_t>(options.count));
  const double log_lo = std::log(options.min_size);
  const double log_hi = std::log(options.max_size);
  for (int n = 0; n < options.count; ++n) {
    SeerProject p;
    p.id = fmt::format("S{:03}", n + 1);
    p.size = std::exp(rng.uniform(log_lo, log_hi));
    p.sibr = rng.uniform(0.0, options.max_sibr);
    for (Param q : rated_params()) {
      const double x = options.integer_ratings ? static_cast<double>(rng.integer(1, kRatingLevels))
                                               : rng.uniform(kMinCoordinate, kMaxCoordinate);
      p.set_rating(q, x);
    }
    const double noise = rng.uniform(-options.effort_noise, options.effort_noise);
    p.actual_effort = estimate_effort(p, truth) * (1.0 + noise);
    out.push_back(std::move(p));
  }
  return out;
}

std::string synthesize_dataset_csv(const ValueTable& truth, const MappingTable& mapping,
                                   SourceModel model, int count, double effort_noise,
                                   SyntheticRng& rng) {
  const auto& drivers = source_drivers(model);
  const auto& labels = source_labels();
  std::string csv = "id,model,size_kloc,effort,unit";
  for (std::string_view d : drivers) csv += fmt::format(",{}", d);
  csv += '\n';
  for (int n = 0; n < count; ++n) {
    RawProjectRecord rec;
    rec.id = fmt::format("{}-{:03}", to_string(model), n + 1);
    rec.source_model = model;
    rec.size_kloc = std::round(std::exp(rng.uniform(std::log(5.0), std::log(500.0))) * 10.0) / 10.0;
    rec.actual_effort = 1.0;
    for (std::string_view d : drivers) {
      // Stay within VL..VH so every driver's rule has a coordinate.
      rec.ratings[std::string(d)] = std::string(labels[static_cast<std::size_t>(rng.integer(0, 4))]);
    }
    const SeerProject project = transfer(rec, mapping);
    const double noise = rng.uniform(-effort_noise, effort_noise);
    const double effort_pm = estimate_effort(project, truth) * (1.0 + noise) * 12.0;
    csv += fmt::format("{},{},{},{},PM", rec.id, to_string(model), format_number(rec.size_kloc),
                       fmt::format("{:.4f}", effort_pm));
    for (std::string_view d : drivers) csv += fmt::format(",{}", rec.ratings[std::string(d)]);
    csv += '\n';
  }
  return csv;
}

}  // namespace seernf
