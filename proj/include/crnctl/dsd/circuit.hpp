#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/network.hpp"
#include "crnctl/sim/integrator.hpp"
#include "crnctl/sim/schedule.hpp"
#include "crnctl/sim/trajectory.hpp"

namespace crnctl::dsd {

enum class StrandRole { signal, messenger, waste };

/// Single strand with abstract domain labels; signal strands carry two toeholds
/// around one specificity domain.
struct Strand {
  std::string name;
  StrandRole role = StrandRole::signal;
  std::vector<std::string> domains;
};

enum class GateStage { recruit, release };

/// Multi-stranded complex supplied at `initial_concentration`. Recruit gates
/// take up the reactants of formal reaction `consumed_by`; release gates
/// (translators) turn its messenger into the products.
struct Gate {
  std::string name;
  std::size_t consumed_by = 0;
  double initial_concentration = 0.0;
  GateStage stage = GateStage::recruit;
  /// Toehold-exposed domains the gate accepts, in binding order.
  std::vector<std::string> accepts;
};

/// Expanded-reaction ids of one formal reaction. Unimolecular reactions use
/// recruit (A + G -> U + W) and release (U + T -> products + W). Bimolecular
/// reactions bind the first reactant reversibly (A + G <-> H, ids `recruit`
/// and `unbind`) before `capture` (H + B -> U + W) and release.
struct FormalMap {
  std::size_t formal = 0;
  std::string label;
  int order = 0;
  std::size_t recruit = 0;
  std::optional<std::size_t> unbind;
  std::optional<std::size_t> capture;
  std::size_t release = 0;
  std::size_t gate = 0;
  std::size_t translator = 0;
  std::optional<std::size_t> intermediate;
  std::size_t messenger = 0;
  /// Calibrated rate constant of the tuned step (recruit).
  double lambda = 0.0;
};

struct DsdCircuit {
  double omega = 0.0;
  double lambda_fast = 0.0;
  std::vector<Strand> strands;
  std::vector<Gate> gates;
  /// Expanded mass-action network; the first `signal_count` species are the
  /// formal species in their original order.
  crn::Network network;
  std::size_t signal_count = 0;
  std::vector<FormalMap> mapping;

  std::vector<std::string> signal_names() const;
  /// Indices in `network` of each gate's species, parallel to `gates`.
  std::vector<std::size_t> gate_species() const;
  /// Gate plus its bound intermediate, which together never increase.
  std::vector<std::vector<std::size_t>> gate_pools() const;
  std::vector<std::size_t> waste_species() const;
};

inline constexpr double kDefaultLambdaFast = 0.01;

/// Two-step strand-displacement realization of a formal network with all
/// reactions first or second order mass-action. The recruit constant is
/// q / omega for unimolecular reactions and q for bimolecular ones; all
/// other steps run at lambda_fast (unbinding at lambda_fast * omega).
DsdCircuit compile_to_dsd(const crn::Network& formal, double omega, double lambda_fast = kDefaultLambdaFast);
DsdCircuit compile_to_dsd(const controller::ClosedLoop& formal, double omega,
                          double lambda_fast = kDefaultLambdaFast);

/// Recruit constants for updated formal rates, keeping the circuit's current state layout.
crn::Network recalibrate(const DsdCircuit& circuit, const crn::Network& formal);

/// Simulates the circuit from its initial gate supply. Schedule events are
/// applied to the formal closed loop and mapped onto recruit constants.
sim::Trajectory simulate_dsd(const DsdCircuit& circuit, const controller::ClosedLoop& formal,
                             const sim::Schedule& schedule, double t_end, const sim::IntegratorOptions& options = {});

/// Columns of the formal species only.
sim::Trajectory signal_projection(const sim::Trajectory& traj, const DsdCircuit& circuit);

}  // namespace crnctl::dsd
