#pragma once

#include <vector>

#include "crnctl/analysis/power.hpp"
#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/sim/schedule.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::sim {

/// Running averages (1/(t - t0)) int_{t0}^t x ds by trapezoidal accumulation.
/// The first sample is the state itself.
Trajectory time_average(const Trajectory& traj);

/// Controller power P(t) = kappa_r alpha mu v + kappa_m alpha v y + kappa_a k v
/// and the cumulative energy E(t) = int_0^t P ds.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> power;
  std::vector<double> energy;
  /// E(t_end) / (t_end - t_0).
  double average = 0.0;

  /// Mean power over [t_from, t_end].
  double average_from(double t_from) const;
};

/// Parameters are taken from the schedule in effect at each sample time.
EnergyTrace power_trace(const Trajectory& traj, const analysis::MetabolicCosts& costs,
                        const controller::ClosedLoop& closed_loop, const Schedule& schedule = {});

}  // namespace crnctl::sim
