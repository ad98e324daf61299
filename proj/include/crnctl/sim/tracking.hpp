#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/sim/schedule.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::sim {

inline constexpr double kTrackingTolerance = 0.01;
inline constexpr double kSettlingFraction = 0.4;

/// Output tracking over one interval between schedule events.
struct IntervalTracking {
  double t_begin = 0.0;
  double t_end = 0.0;
  double setpoint = 0.0;
  /// Output at the last sample before the interval ends.
  double final_output = 0.0;
  double final_relative_error = 0.0;
  /// Start of the settling window, t_begin + fraction (t_end - t_begin).
  double window_start = 0.0;
  double max_relative_error_after_window = 0.0;
  bool settled = false;
  /// Time after t_begin from which the output stays within tolerance, if it does by t_end.
  std::optional<double> settling_time;
};

/// Splits [t0, t_end] at every schedule event and measures |y - mu| / mu in each interval.
std::vector<IntervalTracking> tracking_metrics(const Trajectory& traj, const controller::ClosedLoop& closed_loop,
                                               const Schedule& schedule,
                                               double settling_fraction = kSettlingFraction,
                                               double tolerance = kTrackingTolerance);

struct OscillationCheck {
  /// Peak-to-peak amplitude over the earlier and later half of the window.
  double amplitude_early = 0.0;
  double amplitude_late = 0.0;
  double mean = 0.0;
  bool sustained = false;
};

/// Flags a non-convergent column: the late-half peak-to-peak amplitude exceeds
/// `relative_floor` times the mean and is at least half the early-half amplitude.
OscillationCheck detect_oscillation(const Trajectory& traj, std::size_t column, double t_from,
                                    double relative_floor = 1e-3);

}  // namespace crnctl::sim
