#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace crnctl::sim {

/// Sampled solution: one state row per sample time, columns in species order.
struct Trajectory {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  /// Accepted integrator steps, filled only when requested.
  std::vector<double> step_times;
  std::vector<Eigen::VectorXd> step_states;

  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return times.size(); }
  std::size_t dimension() const { return names.size(); }
  bool empty() const { return times.empty(); }

  /// Linear interpolation between samples; clamps outside the sampled span.
  Eigen::VectorXd at(double t) const;
  std::vector<double> column(std::size_t species) const;
  std::size_t require_column(const std::string& name) const;
  /// Smallest entry over all samples and species.
  double min_value() const;
  /// Samples with t in [t0, t1].
  Trajectory window(double t0, double t1) const;
};

/// Uniform grid of `count` points covering [t0, t1] inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t count);

}  // namespace crnctl::sim
