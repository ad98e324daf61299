#include "crnctl/crn/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crnctl/crn/kinetics.hpp"
#include "crnctl/error.hpp"

namespace crnctl::crn {

int Reaction::order() const {
  int total = 0;
  for (const auto& s : reactants) total += s.count;
  return total;
}

int Reaction::net_change(std::size_t i) const {
  int delta = 0;
  for (const auto& s : reactants) {
    if (s.species == i) delta -= s.count;
  }
  for (const auto& s : products) {
    if (s.species == i) delta += s.count;
  }
  return delta;
}

Network::Network(std::vector<Species> species, std::vector<Reaction> reactions, std::size_t controlled,
                 std::size_t actuated, Eigen::VectorXd inflow)
    : species_(std::move(species)),
      reactions_(std::move(reactions)),
      controlled_(controlled),
      actuated_(actuated),
      inflow_(std::move(inflow)) {
  const std::size_t d = species_.size();
  if (d == 0) throw Error("network has no species");
  std::set<std::string> seen;
  for (const auto& s : species_) {
    if (s.name.empty()) throw Error("species with empty name");
    if (!seen.insert(s.name).second) throw Error("duplicate species name '" + s.name + "'");
    if (!(s.initial_concentration >= 0.0) || !std::isfinite(s.initial_concentration)) {
      throw Error("species '" + s.name + "' has negative or non-finite initial concentration");
    }
  }
  std::set<std::string> labels;
  for (const auto& r : reactions_) {
    const std::string what = r.label.empty() ? std::string("reaction") : "reaction '" + r.label + "'";
    if (!r.label.empty() && !labels.insert(r.label).second) {
      throw Error("duplicate reaction label '" + r.label + "'");
    }
    if (!(r.rate_constant > 0.0) || !std::isfinite(r.rate_constant)) {
      throw Error(what + " has nonpositive rate constant");
    }
    for (const auto* side : {&r.reactants, &r.products}) {
      for (const auto& s : *side) {
        if (s.species >= d) throw Error(what + " references an unknown species index");
        if (s.count < 0) throw Error(what + " has a negative stoichiometric count");
      }
    }
    if (r.hill) {
      if (!(r.hill->theta > 0.0)) throw Error(what + " has nonpositive Hill theta");
      if (r.hill->repressor >= d) throw Error(what + " has an unknown Hill repressor");
    }
  }
  if (controlled_ >= d) throw Error("controlled species index out of range");
  if (actuated_ >= d) throw Error("actuated species index out of range");
  if (inflow_.size() == 0) inflow_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  if (inflow_.size() != static_cast<Eigen::Index>(d)) throw Error("inflow vector has wrong dimension");
  if ((inflow_.array() < 0.0).any()) throw Error("inflow must be nonnegative");
}

std::optional<std::size_t> Network::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Network::require_index(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw Error("unknown species '" + std::string(name) + "'");
}

std::optional<std::size_t> Network::reaction_index(std::string_view label) const {
  for (std::size_t i = 0; i < reactions_.size(); ++i) {
    if (reactions_[i].label == label) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Network::names() const {
  std::vector<std::string> out;
  out.reserve(species_.size());
  for (const auto& s : species_) out.push_back(s.name);
  return out;
}

State Network::initial_state() const {
  State x(static_cast<Eigen::Index>(species_.size()));
  for (std::size_t i = 0; i < species_.size(); ++i) x[static_cast<Eigen::Index>(i)] = species_[i].initial_concentration;
  return x;
}

bool Network::is_unimolecular() const {
  for (const auto& r : reactions_) {
    if (r.order() > 1 || r.hill) return false;
  }
  return true;
}

int Network::max_order() const {
  int m = 0;
  for (const auto& r : reactions_) m = std::max(m, r.order());
  return m;
}

Network Network::with_rate(std::size_t reaction, double rate) const {
  if (reaction >= reactions_.size()) throw Error("reaction index out of range");
  auto reactions = reactions_;
  reactions[reaction].rate_constant = rate;
  return Network(species_, std::move(reactions), controlled_, actuated_, inflow_);
}

Network Network::with_inflow(Eigen::VectorXd inflow) const {
  return Network(species_, reactions_, controlled_, actuated_, std::move(inflow));
}

Network Network::with_initial_state(const State& x0) const {
  if (x0.size() != static_cast<Eigen::Index>(species_.size())) throw Error("initial state has wrong dimension");
  auto species = species_;
  for (std::size_t i = 0; i < species.size(); ++i) species[i].initial_concentration = x0[static_cast<Eigen::Index>(i)];
  return Network(std::move(species), reactions_, controlled_, actuated_, inflow_);
}

Network build_network(std::vector<Species> species, const std::vector<ReactionSpec>& reactions,
                      std::string_view controlled, std::string_view actuated) {
  auto lookup = [&](const std::string& name, const std::string& context) -> std::size_t {
    for (std::size_t i = 0; i < species.size(); ++i) {
      if (species[i].name == name) return i;
    }
    throw Error(context + " references undeclared species '" + name + "'");
  };
  std::vector<Reaction> resolved;
  resolved.reserve(reactions.size());
  for (std::size_t k = 0; k < reactions.size(); ++k) {
    const auto& spec = reactions[k];
    const std::string context = spec.label.empty() ? "reaction #" + std::to_string(k + 1) : "reaction '" + spec.label + "'";
    Reaction r;
    r.label = spec.label;
    r.rate_constant = spec.rate;
    for (const auto& [name, count] : spec.reactants) r.reactants.push_back({lookup(name, context), count});
    for (const auto& [name, count] : spec.products) r.products.push_back({lookup(name, context), count});
    if (spec.hill) r.hill = HillRepression{spec.hill->theta, lookup(spec.hill->repressor, context)};
    resolved.push_back(std::move(r));
  }
  // Resolve indices against the declared list before the constructor validates the rest.
  std::size_t c = 0;
  std::size_t a = 0;
  {
    bool found_c = false;
    bool found_a = false;
    for (std::size_t i = 0; i < species.size(); ++i) {
      if (species[i].name == controlled) {
        c = i;
        found_c = true;
      }
      if (species[i].name == actuated) {
        a = i;
        found_a = true;
      }
    }
    if (!found_c) throw Error("controlled species '" + std::string(controlled) + "' is not declared");
    if (!found_a) throw Error("actuated species '" + std::string(actuated) + "' is not declared");
  }
  return Network(std::move(species), std::move(resolved), c, a);
}

State evaluate_rhs(const Network& network, const State& x) {
  if (x.size() != static_cast<Eigen::Index>(network.size())) throw Error("state has wrong dimension");
  if ((x.array() < 0.0).any()) throw Error("state has a negative entry");
  State dx(x.size());
  Kinetics(network).rhs(x, dx);
  return dx;
}

Eigen::MatrixXd jacobian(const Network& network, const State& x) {
  if (x.size() != static_cast<Eigen::Index>(network.size())) throw Error("state has wrong dimension");
  Eigen::MatrixXd jac;
  Kinetics(network).jacobian(x, jac);
  return jac;
}

}  // namespace crnctl::crn
