#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/network.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::sim {

struct SsaOptions {
  /// Molecules per unit concentration.
  double volume_scale = 1.0;
  double t_end = 1.0;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  std::size_t max_events = 2'000'000'000;

  void validate() const;
};

struct SsaResult {
  /// Sampled copy numbers divided by volume_scale.
  Trajectory trajectory;
  bool extinct = false;
  /// First time the watched species reached zero molecules.
  std::optional<double> extinction_time;
  std::size_t events = 0;
};

/// Gillespie direct method. A reaction of order m with rate constant c has
/// propensity c Omega^(1-m) times the falling factorials of its reactant
/// counts; Hill factors use the repressor concentration n_r / Omega.
/// Initial concentrations times Omega must be integral.
SsaResult ssa_simulate(const crn::Network& network, std::size_t watched_species, const SsaOptions& options);

/// Watches the controller species V.
SsaResult ssa_simulate(const controller::ClosedLoop& closed_loop, const SsaOptions& options);

struct SsaEnsemble {
  Trajectory mean;
  double extinct_fraction = 0.0;
  std::size_t runs = 0;
};

/// Mean over `runs` independent runs seeded with options.seed + i, executed
/// concurrently. Results do not depend on the thread count.
SsaEnsemble ssa_ensemble(const controller::ClosedLoop& closed_loop, const SsaOptions& options, std::size_t runs,
                         std::size_t threads = 0);

}  // namespace crnctl::sim
