#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crnctl/analysis/power.hpp"
#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/sim/integrator.hpp"
#include "crnctl/sim/schedule.hpp"

namespace crnctl::io {

enum class SimulationMethod { ode, ssa };

struct SimulationSettings {
  double t_end = 0.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  SimulationMethod method = SimulationMethod::ode;
  /// Molecules per unit concentration (SSA only).
  double volume_scale = 0.0;
  std::size_t runs = 1;
  /// Start of the window for long-run power and time averages; default t_end / 2.
  std::optional<double> average_from;
  /// Settling window as a fraction of each inter-event interval.
  double settling_fraction = 0.4;

  sim::IntegratorOptions integrator() const;
};

struct DsdSettings {
  double omega = 0.0;
  double lambda_fast = 0.01;
  double divergence_band = 0.0;
};

struct OutputSettings {
  std::string trajectory = "trajectory.csv";
  std::string report = "report.json";
  std::string averages = "averages.csv";
  std::string network = "dsd_network.json";
  std::string gate_report = "gate_report.txt";
  std::string comparison = "comparison.csv";
  std::string sweep = "sweep.csv";
};

/// Dotted parameter path with the values it takes in a sweep.
struct SweepAxis {
  std::string path;
  std::vector<std::string> values;  // JSON text of each value
};

struct Scenario {
  std::string name;
  std::string description;
  crn::Network plant;
  controller::ControllerParams controller;
  std::optional<controller::HillParams> hill;
  std::string controller_name = "v";
  std::vector<controller::Disturbance> disturbances;
  sim::Schedule schedule;
  SimulationSettings simulation;
  std::optional<DsdSettings> dsd;
  std::optional<analysis::MetabolicCosts> costs;
  std::vector<SweepAxis> sweep;
  OutputSettings output;

  /// The validated document after overrides, used to derive sweep variants.
  std::string document;
  std::string base_dir;

  controller::ClosedLoop closed_loop() const;
};

/// Applies "dotted.path=value" overrides; values are parsed as JSON when
/// possible and taken as strings otherwise. Array elements are addressed by index.
std::string apply_overrides(const std::string& json_text, const std::vector<std::string>& overrides,
                            const std::string& origin = "scenario");

/// Parses and validates a scenario document. Relative network file paths
/// resolve against `base_dir`.
Scenario parse_scenario(const std::string& json_text, const std::vector<std::string>& overrides = {},
                        const std::string& base_dir = ".", const std::string& origin = "scenario");
Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace crnctl::io
