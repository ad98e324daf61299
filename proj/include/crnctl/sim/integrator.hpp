#pragma once

#include <cstddef>
#include <vector>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/network.hpp"
#include "crnctl/sim/schedule.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::sim {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Points of the uniform output grid over [0, t_end].
  std::size_t samples = 1000;
  /// Also record every accepted step in Trajectory::step_times/step_states.
  bool keep_steps = false;
  /// Upper bound on the step size; 0 means unbounded.
  double max_step = 0.0;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

/// Interval [t_begin, t_end] over which `network` is held fixed.
struct Segment {
  double t_begin = 0.0;
  double t_end = 0.0;
  crn::Network network;
};

/// Dormand-Prince 4(5) integration across consecutive segments. The state is
/// carried over unchanged at each boundary and the step control restarts.
/// Output is sampled from the dense interpolant on a uniform grid spanning
/// the first segment's start to the last segment's end.
Trajectory integrate_segments(const std::vector<Segment>& segments, const crn::State& x0,
                              const IntegratorOptions& options = {});

Trajectory integrate(const crn::Network& network, const crn::State& x0, double t_end,
                     const IntegratorOptions& options = {});

/// Splits [0, t_end] at the schedule's event times; events at or after t_end are ignored.
std::vector<Segment> schedule_segments(const controller::ClosedLoop& closed_loop, const Schedule& schedule,
                                       double t_end);

/// Closed-loop trajectory starting from the network's initial concentrations.
Trajectory integrate(const controller::ClosedLoop& closed_loop, const Schedule& schedule, double t_end,
                     const IntegratorOptions& options = {});

Trajectory integrate(const controller::ClosedLoop& closed_loop, const Schedule& schedule, double t_end,
                     const crn::State& x0, const IntegratorOptions& options = {});

}  // namespace crnctl::sim
