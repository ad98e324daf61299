#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crnctl/dsd/circuit.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::dsd {

inline constexpr double kDepletionThreshold = 0.1;

struct GateDepletion {
  std::string gate;
  /// Smallest remaining fraction (gate pool / omega) over the trajectory.
  double min_fraction = 1.0;
  /// First time the remaining fraction drops below the threshold.
  std::optional<double> threshold_time;
};

struct DepletionSummary {
  std::vector<GateDepletion> gates;
  std::optional<double> first_threshold_time;
  std::string first_gate;
};

DepletionSummary gate_depletion(const DsdCircuit& circuit, const sim::Trajectory& traj,
                                double threshold = kDepletionThreshold);

/// Plain-text inventory of the species initially added (signals, gates,
/// translators) and, given a circuit trajectory, remaining gate fractions
/// over time and the first crossing of the depletion threshold.
std::string gate_report(const DsdCircuit& circuit, const sim::Trajectory* traj = nullptr,
                        std::size_t report_rows = 11);

}  // namespace crnctl::dsd
