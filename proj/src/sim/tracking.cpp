#include "crnctl/sim/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnctl/error.hpp"

namespace crnctl::sim {

std::vector<IntervalTracking> tracking_metrics(const Trajectory& traj, const controller::ClosedLoop& closed_loop,
                                               const Schedule& schedule, double settling_fraction,
                                               double tolerance) {
  if (traj.empty()) throw Error("tracking metrics need a nonempty trajectory");
  if (!(settling_fraction > 0.0 && settling_fraction < 1.0)) throw Error("settling fraction must lie in (0, 1)");
  const auto y_col = static_cast<Eigen::Index>(closed_loop.plant().controlled());
  const double t0 = traj.times.front();
  const double t_end = traj.times.back();

  std::vector<double> cuts{t0};
  for (const double t : schedule.event_times()) {
    if (t > t0 && t < t_end) cuts.push_back(t);
  }
  cuts.push_back(t_end);

  std::vector<IntervalTracking> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    IntervalTracking m;
    m.t_begin = cuts[i];
    m.t_end = cuts[i + 1];
    m.setpoint = schedule.state_at(closed_loop, m.t_begin).params().mu;
    m.window_start = m.t_begin + settling_fraction * (m.t_end - m.t_begin);
    const bool last = i + 2 == cuts.size();
    std::optional<double> last_violation;
    bool any = false;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double t = traj.times[k];
      if (t < m.t_begin || t > m.t_end || (!last && t >= m.t_end)) continue;
      const double err = std::abs(traj.states[k][y_col] - m.setpoint) / m.setpoint;
      m.final_output = traj.states[k][y_col];
      m.final_relative_error = err;
      any = true;
      if (t >= m.window_start) m.max_relative_error_after_window = std::max(m.max_relative_error_after_window, err);
      if (err >= tolerance) last_violation = t;
    }
    if (!any) continue;
    m.settled = m.max_relative_error_after_window < tolerance;
    if (m.final_relative_error < tolerance) {
      m.settling_time = last_violation ? *last_violation - m.t_begin : 0.0;
    }
    out.push_back(m);
  }
  return out;
}

OscillationCheck detect_oscillation(const Trajectory& traj, std::size_t column, double t_from,
                                    double relative_floor) {
  const auto col = traj.column(column);
  const double t_end = traj.times.back();
  if (!(t_from < t_end)) throw Error("oscillation window starts after the trajectory ends");
  const double t_mid = 0.5 * (t_from + t_end);
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t < t_from) continue;
    const double x = col[k];
    if (t < t_mid) {
      lo1 = std::min(lo1, x);
      hi1 = std::max(hi1, x);
    } else {
      lo2 = std::min(lo2, x);
      hi2 = std::max(hi2, x);
      sum += x;
      ++count;
    }
  }
  OscillationCheck c;
  if (count == 0 || !std::isfinite(lo1)) return c;
  c.amplitude_early = hi1 - lo1;
  c.amplitude_late = hi2 - lo2;
  c.mean = sum / static_cast<double>(count);
  c.sustained = c.amplitude_late > relative_floor * std::abs(c.mean) && c.amplitude_late >= 0.5 * c.amplitude_early;
  return c;
}

}  // namespace crnctl::sim
