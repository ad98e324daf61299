#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crnctl/analysis/newton.hpp"
#include "crnctl/crn/linear_form.hpp"
#include "crnctl/io/scenario.hpp"

namespace crnctl::io {

enum class Command { analyze, simulate, compile_dsd, sweep };

Command parse_command(std::string_view name);
std::string_view command_name(Command command);

/// Affine model used for analysis: exact for unimolecular plants, otherwise
/// the linearization at the closed-loop equilibrium found by Newton's method.
struct LocalModel {
  crn::LinearForm lf;
  std::optional<analysis::NonlinearEquilibrium> newton;
};

LocalModel local_model(const Scenario& scenario);

/// Structured summary (JSON text) of structure, equilibria, stability,
/// disturbance and power analysis for the scenario's closed loop.
std::string analysis_summary(const Scenario& scenario);

struct RunOptions {
  std::string out_dir = ".";
  /// Worker threads for sweeps and SSA ensembles; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

/// Runs a command and writes its artifacts into options.out_dir.
/// Returns the written file paths in a fixed order.
std::vector<std::string> run_scenario(Command command, const Scenario& scenario, const RunOptions& options = {});

}  // namespace crnctl::io
