#include "crnctl/dsd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "crnctl/error.hpp"

namespace crnctl::dsd {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

double pool_fraction(const Eigen::VectorXd& state, const std::vector<std::size_t>& pool, double omega) {
  double total = 0.0;
  for (const auto i : pool) total += state[static_cast<Eigen::Index>(i)];
  return total / omega;
}

}  // namespace

DepletionSummary gate_depletion(const DsdCircuit& circuit, const sim::Trajectory& traj, double threshold) {
  if (traj.dimension() != circuit.network.size()) throw Error("trajectory does not match the circuit");
  DepletionSummary out;
  const auto pools = circuit.gate_pools();
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    GateDepletion d;
    d.gate = circuit.gates[g].name;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double f = pool_fraction(traj.states[k], pools[g], circuit.omega);
      d.min_fraction = std::min(d.min_fraction, f);
      if (!d.threshold_time && f < threshold) d.threshold_time = traj.times[k];
    }
    if (d.threshold_time && (!out.first_threshold_time || *d.threshold_time < *out.first_threshold_time)) {
      out.first_threshold_time = d.threshold_time;
      out.first_gate = d.gate;
    }
    out.gates.push_back(std::move(d));
  }
  return out;
}

std::string gate_report(const DsdCircuit& circuit, const sim::Trajectory* traj, std::size_t report_rows) {
  std::ostringstream os;
  const auto& species = circuit.network.species();
  os << "DSD circuit: " << circuit.mapping.size() << " formal reactions, " << circuit.network.reactions().size()
     << " expanded reactions, " << circuit.gates.size() << " gates/translators\n";
  os << "omega = " << fmt(circuit.omega) << ", lambda_fast = " << fmt(circuit.lambda_fast) << "\n\n";

  os << "Initial species\n";
  for (const auto& s : circuit.strands) {
    if (s.role != StrandRole::signal) continue;
    const auto i = circuit.network.require_index(s.name);
    os << "  signal      " << s.name << "  [" << join(s.domains, " ") << "]  " << fmt(species[i].initial_concentration)
       << "\n";
  }
  for (const auto& g : circuit.gates) {
    os << "  " << (g.stage == GateStage::recruit ? "gate        " : "translator  ") << g.name << "  accepts ["
       << join(g.accepts, " ") << "]  " << fmt(g.initial_concentration) << "\n";
  }

  os << "\nCalibration\n";
  for (const auto& m : circuit.mapping) {
    os << "  " << m.label << " (order " << m.order << "): lambda = " << fmt(m.lambda) << "\n";
  }

  if (traj != nullptr && !traj->empty()) {
    const auto summary = gate_depletion(circuit, *traj);
    const auto pools = circuit.gate_pools();
    os << "\nRemaining gate fraction\n  t";
    for (const auto& g : circuit.gates) os << "  " << g.name;
    os << "\n";
    const std::size_t rows = std::max<std::size_t>(2, std::min(report_rows, traj->size()));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t k = r * (traj->size() - 1) / (rows - 1);
      os << "  " << fmt(traj->times[k]);
      for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        os << "  " << fmt(pool_fraction(traj->states[k], pools[g], circuit.omega));
      }
      os << "\n";
    }
    os << "\nDepletion below " << fmt(100.0 * kDepletionThreshold) << "% of omega: ";
    if (summary.first_threshold_time) {
      os << summary.first_gate << " at t = " << fmt(*summary.first_threshold_time) << "\n";
    } else {
      os << "none\n";
    }
  }
  return os.str();
}

}  // namespace crnctl::dsd
