#include "crnctl/sim/trajectory.hpp"

#include <algorithm>
#include <limits>

#include "crnctl/error.hpp"

namespace crnctl::sim {

Eigen::VectorXd Trajectory::at(double t) const {
  if (times.empty()) throw Error("interpolation on an empty trajectory");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  if (span <= 0.0) return states[hi];
  const double w = (t - times[lo]) / span;
  return (1.0 - w) * states[lo] + w * states[hi];
}

std::vector<double> Trajectory::column(std::size_t species) const {
  if (species >= dimension()) throw Error("trajectory column out of range");
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[static_cast<Eigen::Index>(species)]);
  return out;
}

std::size_t Trajectory::require_column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw Error("trajectory has no column '" + name + "'");
}

double Trajectory::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : states) m = std::min(m, s.minCoeff());
  return m;
}

Trajectory Trajectory::window(double t0, double t1) const {
  Trajectory out;
  out.names = names;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t0 && times[i] <= t1) {
      out.times.push_back(times[i]);
      out.states.push_back(states[i]);
    }
  }
  return out;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t count) {
  if (count < 2) throw Error("a sample grid needs at least 2 points");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = t1;
  return grid;
}

}  // namespace crnctl::sim
