#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seernf/dataset.hpp"
#include "seernf/project.hpp"
#include "seernf/value_table.hpp"

namespace seernf {

/// Deterministic generator for synthetic experiments. Draws go through
/// explicit bit manipulation rather than <random> distributions so streams
/// are identical across standard libraries.
class SyntheticRng {
 public:
  explicit SyntheticRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Multiplies every entry by an independent factor in [1 − amplitude,
/// 1 + amplitude], then restores each row's declared monotone order.
ValueTable perturb_table(const ValueTable& table, double amplitude, SyntheticRng& rng);

struct SyntheticProjectOptions {
  int count = 60;
  double min_size = 5'000.0;
  double max_size = 500'000.0;
  double max_sibr = 0.5;
  double effort_noise = 0.0;  // efforts scaled by (1 + ε), ε uniform in ±noise
  bool integer_ratings = false;
};

/// Projects whose actual efforts come from evaluating `truth`.
std::vector<SeerProject> synthesize_projects(const ValueTable& truth,
                                             const SyntheticProjectOptions& options,
                                             SyntheticRng& rng);

/// Raw COCOMO-style dataset CSV whose efforts come from `truth` after
/// transfer through `mapping`. Every driver of the model is rated.
std::string synthesize_dataset_csv(const ValueTable& truth, const MappingTable& mapping,
                                   SourceModel model, int count, double effort_noise,
                                   SyntheticRng& rng);

}  // namespace seernf
