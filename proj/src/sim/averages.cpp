#include "crnctl/sim/averages.hpp"

#include <algorithm>

#include "crnctl/error.hpp"

namespace crnctl::sim {

Trajectory time_average(const Trajectory& traj) {
  Trajectory out;
  out.names = traj.names;
  if (traj.empty()) return out;
  out.times = traj.times;
  out.states.reserve(traj.size());
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(traj.states.front().size());
  const double t0 = traj.times.front();
  out.states.push_back(traj.states.front());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    integral += 0.5 * dt * (traj.states[i] + traj.states[i - 1]);
    const double span = traj.times[i] - t0;
    out.states.push_back(span > 0.0 ? Eigen::VectorXd(integral / span) : traj.states[i]);
  }
  return out;
}

double EnergyTrace::average_from(double t_from) const {
  if (times.size() < 2) throw Error("energy trace needs at least 2 samples");
  if (t_from <= times.front()) return average;
  if (t_from >= times.back()) throw Error("averaging window starts after the trace ends");
  const auto it = std::lower_bound(times.begin(), times.end(), t_from);
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  // Energy at t_from by linear interpolation of the cumulative trace.
  const double w = (t_from - times[i - 1]) / (times[i] - times[i - 1]);
  const double e_from = (1.0 - w) * energy[i - 1] + w * energy[i];
  return (energy.back() - e_from) / (times.back() - t_from);
}

EnergyTrace power_trace(const Trajectory& traj, const analysis::MetabolicCosts& costs,
                        const controller::ClosedLoop& closed_loop, const Schedule& schedule) {
  costs.validate();
  if (traj.dimension() != closed_loop.dimension()) throw Error("trajectory does not match the closed loop");
  EnergyTrace trace;
  trace.times = traj.times;
  const auto vi = static_cast<Eigen::Index>(closed_loop.controller_index());
  const auto yi = static_cast<Eigen::Index>(closed_loop.plant().controlled());

  const auto& events = schedule.events();
  auto current = schedule.state_at(closed_loop, traj.empty() ? 0.0 : traj.times.front());
  std::size_t next_event = 0;
  while (next_event < events.size() && !traj.empty() && events[next_event].time <= traj.times.front()) {
    ++next_event;
  }
  trace.power.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    while (next_event < events.size() && events[next_event].time <= traj.times[i]) {
      current = current.with_parameter(events[next_event].target, events[next_event].value);
      ++next_event;
    }
    const auto& params = current.params();
    const double v = traj.states[i][vi];
    const double y = traj.states[i][yi];
    const double p = costs.kappa_r * params.alpha * params.mu * v + costs.kappa_m * params.alpha * v * y +
                     costs.kappa_a * params.k * v;
    trace.power.push_back(std::max(p, 0.0));
  }
  trace.energy.assign(traj.size(), 0.0);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    trace.energy[i] =
        trace.energy[i - 1] + 0.5 * (trace.times[i] - trace.times[i - 1]) * (trace.power[i] + trace.power[i - 1]);
  }
  if (traj.size() >= 2) {
    trace.average = trace.energy.back() / (trace.times.back() - trace.times.front());
  } else if (!trace.power.empty()) {
    trace.average = trace.power.front();
  }
  return trace;
}

}  // namespace crnctl::sim
