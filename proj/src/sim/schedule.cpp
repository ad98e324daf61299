#include "crnctl/sim/schedule.hpp"

#include <cmath>

#include "crnctl/error.hpp"

namespace crnctl::sim {

Schedule::Schedule(std::vector<ScheduleEvent> events) : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (!std::isfinite(events_[i].time) || events_[i].time < 0.0) throw Error("schedule event time must be >= 0");
    if (i > 0 && !(events_[i].time > events_[i - 1].time)) {
      throw Error("schedule event times must be strictly increasing");
    }
  }
}

void Schedule::validate(const controller::ClosedLoop& closed_loop) const {
  auto cl = closed_loop;
  for (const auto& e : events_) {
    try {
      cl = cl.with_parameter(e.target, e.value);
    } catch (const Error& err) {
      throw Error("schedule event at t=" + std::to_string(e.time) + " on '" + e.target + "': " + err.what());
    }
  }
}

controller::ClosedLoop Schedule::state_at(const controller::ClosedLoop& closed_loop, double t) const {
  auto cl = closed_loop;
  for (const auto& e : events_) {
    if (e.time <= t) cl = cl.with_parameter(e.target, e.value);
  }
  return cl;
}

std::vector<double> Schedule::event_times() const {
  std::vector<double> out;
  for (const auto& e : events_) {
    out.push_back(e.time);
  }
  return out;
}

}  // namespace crnctl::sim
