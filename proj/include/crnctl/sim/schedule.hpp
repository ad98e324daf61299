#pragma once

#include <string>
#include <vector>

#include "crnctl/controller/closed_loop.hpp"

namespace crnctl::sim {

/// Step change of one closed-loop parameter (see ClosedLoop::parameter paths).
struct ScheduleEvent {
  double time = 0.0;
  std::string target;
  double value = 0.0;
};

class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<ScheduleEvent> events);

  const std::vector<ScheduleEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  /// Checks every event against the closed loop by applying it in order.
  void validate(const controller::ClosedLoop& closed_loop) const;

  /// Closed loop with every event at time <= t applied.
  controller::ClosedLoop state_at(const controller::ClosedLoop& closed_loop, double t) const;

  /// Event times in increasing order.
  std::vector<double> event_times() const;

 private:
  std::vector<ScheduleEvent> events_;
};

}  // namespace crnctl::sim
