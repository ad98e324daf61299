#include "crnctl/dsd/circuit.hpp"

#include <cmath>

#include "crnctl/error.hpp"

namespace crnctl::dsd {

namespace {

/// True when the reaction returns at least one copy of `species` per copy consumed.
bool is_catalyst(const crn::Reaction& r, std::size_t species) {
  return r.net_change(species) >= 0;
}

/// Reactant species expanded by multiplicity. For a bimolecular reaction the
/// first entry binds the gate reversibly and is partly held in the bound
/// complex, so a catalyst goes first: its free level is restored as soon as
/// the reaction completes.
std::vector<std::size_t> reactant_sequence(const crn::Reaction& r) {
  std::vector<std::size_t> out;
  for (const auto& s : r.reactants) {
    for (int i = 0; i < s.count; ++i) out.push_back(s.species);
  }
  if (out.size() == 2 && out[0] != out[1] && !is_catalyst(r, out[0]) && is_catalyst(r, out[1])) {
    std::swap(out[0], out[1]);
  }
  return out;
}

void check_formal(const crn::Network& formal) {
  if (formal.inflow().size() > 0 && (formal.inflow().array() != 0.0).any()) {
    throw Error("DSD compilation does not support constant inflow terms");
  }
  for (const auto& r : formal.reactions()) {
    if (r.hill) throw Error("DSD compilation requires mass-action kinetics; '" + r.label + "' has a Hill rate law");
    const int order = r.order();
    if (order == 0) throw Error("DSD compilation does not support zeroth-order reaction '" + r.label + "'");
    if (order > 2) throw Error("DSD compilation does not support termolecular reaction '" + r.label + "'");
  }
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

std::vector<std::string> DsdCircuit::signal_names() const {
  auto names = network.names();
  names.resize(signal_count);
  return names;
}

std::vector<std::size_t> DsdCircuit::gate_species() const {
  std::vector<std::size_t> out;
  for (const auto& g : gates) out.push_back(network.require_index(g.name));
  return out;
}

std::vector<std::vector<std::size_t>> DsdCircuit::gate_pools() const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& g : gates) {
    std::vector<std::size_t> pool{network.require_index(g.name)};
    const auto& m = mapping.at(g.consumed_by);
    if (g.stage == GateStage::recruit && m.intermediate) pool.push_back(*m.intermediate);
    out.push_back(std::move(pool));
  }
  return out;
}

std::vector<std::size_t> DsdCircuit::waste_species() const {
  std::vector<std::size_t> out;
  for (const auto& s : strands) {
    if (s.role == StrandRole::waste) out.push_back(network.require_index(s.name));
  }
  return out;
}

DsdCircuit compile_to_dsd(const crn::Network& formal, double omega, double lambda_fast) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error("gate supply omega must be > 0");
  if (!(lambda_fast > 0.0) || !std::isfinite(lambda_fast)) throw Error("lambda_fast must be > 0");
  check_formal(formal);

  DsdCircuit c;
  c.omega = omega;
  c.lambda_fast = lambda_fast;
  c.signal_count = formal.size();

  std::vector<crn::Species> species = formal.species();
  for (std::size_t i = 0; i < formal.size(); ++i) {
    c.strands.push_back({formal.species()[i].name, StrandRole::signal, {"ta" + idx(i), "S" + idx(i), "tb" + idx(i)}});
  }
  auto add_species = [&](const std::string& name, double x0) {
    for (const auto& s : species) {
      if (s.name == name) throw Error("DSD species name collision on '" + name + "'");
    }
    species.push_back({name, x0});
    return species.size() - 1;
  };

  const auto& reactions = formal.reactions();
  // Layout: messengers, gates and translators, intermediates, waste.
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    FormalMap m;
    m.formal = r;
    m.label = reactions[r].label;
    m.order = reactions[r].order();
    m.messenger = add_species("U_" + m.label, 0.0);
    c.strands.push_back({"U_" + m.label, StrandRole::messenger, {"tm" + idx(r), "M" + idx(r), "tn" + idx(r)}});
    c.mapping.push_back(std::move(m));
  }
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    auto& m = c.mapping[r];
    Gate gate{"G_" + m.label, r, omega, GateStage::recruit, {}};
    for (const auto s : reactant_sequence(reactions[r])) {
      gate.accepts.push_back("ta" + idx(s));
      gate.accepts.push_back("S" + idx(s));
    }
    m.gate = add_species(gate.name, omega);
    c.gates.push_back(std::move(gate));
    Gate translator{"T_" + m.label, r, omega, GateStage::release, {"tm" + idx(r), "M" + idx(r)}};
    m.translator = add_species(translator.name, omega);
    c.gates.push_back(std::move(translator));
  }
  for (auto& m : c.mapping) {
    if (m.order == 2) m.intermediate = add_species("H_" + m.label, 0.0);
  }
  std::vector<std::size_t> waste(reactions.size());
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    const auto& label = c.mapping[r].label;
    waste[r] = add_species("W_" + label, 0.0);
    c.strands.push_back({"W_" + label, StrandRole::waste, {"W" + idx(r)}});
  }

  std::vector<crn::Reaction> expanded;
  auto emit = [&](std::string label, std::vector<crn::Stoich> in, std::vector<crn::Stoich> out, double rate) {
    expanded.push_back(crn::Reaction{std::move(label), std::move(in), std::move(out), rate, std::nullopt});
    return expanded.size() - 1;
  };
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    auto& m = c.mapping[r];
    const auto seq = reactant_sequence(reactions[r]);
    const double q = reactions[r].rate_constant;
    if (m.order == 1) {
      m.lambda = q / omega;
      m.recruit = emit(m.label + ".recruit", {{seq[0], 1}, {m.gate, 1}}, {{m.messenger, 1}, {waste[r], 1}}, m.lambda);
    } else {
      m.lambda = q;
      m.recruit = emit(m.label + ".recruit", {{seq[0], 1}, {m.gate, 1}}, {{*m.intermediate, 1}}, m.lambda);
      m.unbind = emit(m.label + ".unbind", {{*m.intermediate, 1}}, {{seq[0], 1}, {m.gate, 1}}, lambda_fast * omega);
      m.capture = emit(m.label + ".capture", {{*m.intermediate, 1}, {seq[1], 1}},
                       {{m.messenger, 1}, {waste[r], 1}}, lambda_fast);
    }
    auto products = reactions[r].products;
    products.push_back({waste[r], 1});
    m.release = emit(m.label + ".release", {{m.messenger, 1}, {m.translator, 1}}, std::move(products), lambda_fast);
  }

  c.network = crn::Network(std::move(species), std::move(expanded), formal.controlled(), formal.actuated());
  return c;
}

DsdCircuit compile_to_dsd(const controller::ClosedLoop& formal, double omega, double lambda_fast) {
  return compile_to_dsd(formal.network(), omega, lambda_fast);
}

crn::Network recalibrate(const DsdCircuit& circuit, const crn::Network& formal) {
  check_formal(formal);
  if (formal.size() != circuit.signal_count || formal.reactions().size() != circuit.mapping.size()) {
    throw Error("formal network does not match the compiled circuit");
  }
  auto net = circuit.network;
  for (const auto& m : circuit.mapping) {
    const auto& r = formal.reactions()[m.formal];
    if (r.label != m.label || r.order() != m.order) throw Error("formal reaction '" + r.label + "' changed shape");
    const double lambda = m.order == 1 ? r.rate_constant / circuit.omega : r.rate_constant;
    net = net.with_rate(m.recruit, lambda);
  }
  return net;
}

sim::Trajectory simulate_dsd(const DsdCircuit& circuit, const controller::ClosedLoop& formal,
                             const sim::Schedule& schedule, double t_end, const sim::IntegratorOptions& options) {
  auto segments = sim::schedule_segments(formal, schedule, t_end);
  for (auto& seg : segments) seg.network = recalibrate(circuit, seg.network);
  return sim::integrate_segments(segments, circuit.network.initial_state(), options);
}

sim::Trajectory signal_projection(const sim::Trajectory& traj, const DsdCircuit& circuit) {
  sim::Trajectory out;
  const auto n = static_cast<Eigen::Index>(circuit.signal_count);
  out.names = circuit.signal_names();
  out.times = traj.times;
  out.states.reserve(traj.states.size());
  for (const auto& s : traj.states) out.states.push_back(s.head(n));
  out.accepted_steps = traj.accepted_steps;
  out.rejected_steps = traj.rejected_steps;
  return out;
}

}  // namespace crnctl::dsd
