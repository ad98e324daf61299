#include "crnctl/dsd/compare.hpp"

#include <algorithm>
#include <cmath>

#include "crnctl/error.hpp"

namespace crnctl::dsd {

double ComparisonMetrics::max_deviation() const {
  double m = 0.0;
  for (const double d : max_abs_deviation) m = std::max(m, d);
  return m;
}

double ComparisonMetrics::max_deviation_of(const std::string& name) const {
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (species[i] == name) return max_abs_deviation[i];
  }
  throw Error("comparison has no species '" + name + "'");
}

ComparisonMetrics compare_traces(const sim::Trajectory& ideal, const sim::Trajectory& dsd,
                                 const std::vector<std::string>& species, double band) {
  if (!(band > 0.0)) throw Error("divergence band must be > 0");
  if (ideal.empty() || dsd.empty()) throw Error("cannot compare empty trajectories");
  ComparisonMetrics m;
  m.species = species;
  m.band = band;
  std::vector<std::size_t> ci, cd;
  for (const auto& s : species) {
    ci.push_back(ideal.require_column(s));
    cd.push_back(dsd.require_column(s));
  }
  m.max_abs_deviation.assign(species.size(), 0.0);
  std::vector<double> sq(species.size(), 0.0);
  for (std::size_t k = 0; k < ideal.size(); ++k) {
    const double t = ideal.times[k];
    const auto other = dsd.at(t);
    for (std::size_t j = 0; j < species.size(); ++j) {
      const double dev = std::abs(ideal.states[k][static_cast<Eigen::Index>(ci[j])] -
                                  other[static_cast<Eigen::Index>(cd[j])]);
      m.max_abs_deviation[j] = std::max(m.max_abs_deviation[j], dev);
      sq[j] += dev * dev;
      if (!m.divergence_time && dev > band) m.divergence_time = t;
    }
  }
  for (const double s : sq) m.rms_deviation.push_back(std::sqrt(s / static_cast<double>(ideal.size())));
  return m;
}

sim::Trajectory comparison_table(const sim::Trajectory& ideal, const sim::Trajectory& dsd,
                                 const std::vector<std::string>& species) {
  sim::Trajectory out;
  std::vector<std::size_t> ci, cd;
  for (const auto& s : species) {
    ci.push_back(ideal.require_column(s));
    cd.push_back(dsd.require_column(s));
    out.names.push_back(s + "_exact");
    out.names.push_back(s + "_dsd");
  }
  out.times = ideal.times;
  for (std::size_t k = 0; k < ideal.size(); ++k) {
    const auto other = dsd.at(ideal.times[k]);
    Eigen::VectorXd row(static_cast<Eigen::Index>(2 * species.size()));
    for (std::size_t j = 0; j < species.size(); ++j) {
      row[static_cast<Eigen::Index>(2 * j)] = ideal.states[k][static_cast<Eigen::Index>(ci[j])];
      row[static_cast<Eigen::Index>(2 * j + 1)] = other[static_cast<Eigen::Index>(cd[j])];
    }
    out.states.push_back(std::move(row));
  }
  return out;
}

}  // namespace crnctl::dsd
