#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crnctl/sim/trajectory.hpp"

namespace crnctl::dsd {

struct ComparisonMetrics {
  std::vector<std::string> species;
  /// Per species, parallel to `species`.
  std::vector<double> max_abs_deviation;
  std::vector<double> rms_deviation;
  double band = 0.0;
  /// First grid time at which any species deviates by more than `band`.
  std::optional<double> divergence_time;

  double max_deviation() const;
  double max_deviation_of(const std::string& name) const;
};

/// Deviations of `dsd` from `ideal` on the ideal trajectory's time grid, over
/// the named species only (both trajectories must contain them).
ComparisonMetrics compare_traces(const sim::Trajectory& ideal, const sim::Trajectory& dsd,
                                 const std::vector<std::string>& species, double band);

/// Side-by-side table with columns <s>_exact and <s>_dsd for each species.
sim::Trajectory comparison_table(const sim::Trajectory& ideal, const sim::Trajectory& dsd,
                                 const std::vector<std::string>& species);

}  // namespace crnctl::dsd
