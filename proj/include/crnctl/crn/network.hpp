#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace crnctl::crn {

using State = Eigen::VectorXd;

struct Species {
  std::string name;
  double initial_concentration = 0.0;
};

/// One (species, stoichiometric count) entry of a reaction side.
struct Stoich {
  std::size_t species = 0;
  int count = 0;
};

/// Multiplies the mass-action propensity by theta / (theta + x_repressor).
struct HillRepression {
  double theta = 0.0;
  std::size_t repressor = 0;
};

struct Reaction {
  std::string label;
  std::vector<Stoich> reactants;
  std::vector<Stoich> products;
  double rate_constant = 0.0;
  std::optional<HillRepression> hill;

  /// Sum of reactant stoichiometric counts.
  int order() const;
  /// Net change of species `i` when the reaction fires once.
  int net_change(std::size_t i) const;
};

/// A validated reaction network (species in declaration order) with a
/// controlled output species and an actuated input species. `inflow` is a
/// nonnegative constant source term added to the reaction rate equations.
class Network {
 public:
  Network() = default;
  Network(std::vector<Species> species, std::vector<Reaction> reactions, std::size_t controlled,
          std::size_t actuated, Eigen::VectorXd inflow = {});

  std::size_t size() const { return species_.size(); }
  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  std::size_t controlled() const { return controlled_; }
  std::size_t actuated() const { return actuated_; }
  const Eigen::VectorXd& inflow() const { return inflow_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;
  std::optional<std::size_t> reaction_index(std::string_view label) const;
  std::vector<std::string> names() const;
  State initial_state() const;

  /// True when every reaction is zeroth or first order mass-action.
  bool is_unimolecular() const;
  int max_order() const;

  Network with_rate(std::size_t reaction, double rate) const;
  Network with_inflow(Eigen::VectorXd inflow) const;
  Network with_initial_state(const State& x0) const;

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::size_t controlled_ = 0;
  std::size_t actuated_ = 0;
  Eigen::VectorXd inflow_;
};

struct HillSpec {
  double theta = 0.0;
  std::string repressor;
};

/// Name-based reaction description, resolved by build_network.
struct ReactionSpec {
  std::string label;
  std::vector<std::pair<std::string, int>> reactants;
  std::vector<std::pair<std::string, int>> products;
  double rate = 0.0;
  std::optional<HillSpec> hill;
};

Network build_network(std::vector<Species> species, const std::vector<ReactionSpec>& reactions,
                      std::string_view controlled, std::string_view actuated);

/// Mass-action reaction rate equations sum_k lambda_k(x) zeta_k plus inflow.
/// Throws on negative or wrongly sized state.
State evaluate_rhs(const Network& network, const State& x);

/// Analytic Jacobian of evaluate_rhs.
Eigen::MatrixXd jacobian(const Network& network, const State& x);

}  // namespace crnctl::crn
