#include "crnctl/io/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>

#include "crnctl/analysis/disturbance.hpp"
#include "crnctl/analysis/equilibrium.hpp"
#include "crnctl/analysis/power.hpp"
#include "crnctl/analysis/stability.hpp"
#include "crnctl/dsd/circuit.hpp"
#include "crnctl/dsd/compare.hpp"
#include "crnctl/dsd/report.hpp"
#include "crnctl/io/csv.hpp"
#include "crnctl/io/network_json.hpp"
#include "crnctl/sim/averages.hpp"
#include "crnctl/sim/integrator.hpp"
#include "crnctl/sim/ssa.hpp"
#include "crnctl/sim/tracking.hpp"
#include "json_util.hpp"

namespace crnctl::io {

using detail::Json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite numbers as-is, infinities as "inf"/"-inf", NaN as null.
Json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json opt_num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

Json spectrum_json(const crn::Spectrum& s) {
  Json out = Json::array();
  for (const auto& z : s) out.push_back(Json::array({num(z.real()), num(z.imag())}));
  return out;
}

Json state_json(const std::vector<std::string>& names, const Eigen::VectorXd& x) {
  Json out = Json::object();
  for (std::size_t i = 0; i < names.size() && static_cast<Eigen::Index>(i) < x.size(); ++i) {
    out[names[i]] = num(x[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

Json point_json(const Scenario& s, const analysis::EquilibriumPoint& p) {
  Json out = state_json(s.plant.names(), p.x);
  out[s.controller_name] = num(p.v);
  return out;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

double average_start(const Scenario& s) { return s.simulation.average_from.value_or(0.5 * s.simulation.t_end); }

analysis::NonlinearEquilibrium newton_equilibrium(const Scenario& s, const controller::ClosedLoop& cl) {
  Eigen::VectorXd guess = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(cl.dimension()), s.controller.mu);
  guess[static_cast<Eigen::Index>(cl.controller_index())] = s.controller.v0;
  try {
    return analysis::solve_equilibrium_nonlinear(cl, guess);
  } catch (const Error&) {
    // Fall back to the end state of an unscheduled run as the starting guess.
    sim::IntegratorOptions opts = s.simulation.integrator();
    opts.samples = 2;
    const auto traj = sim::integrate(cl, sim::Schedule{}, s.simulation.t_end, opts);
    Eigen::VectorXd end = traj.states.back();
    for (Eigen::Index i = 0; i < end.size(); ++i) end[i] = std::max(end[i], 1e-6);
    return analysis::solve_equilibrium_nonlinear(cl, end);
  }
}

Json structure_json(const crn::StructureReport& r) {
  return Json{{"unimolecular", r.is_unimolecular},
              {"metzler", r.is_metzler},
              {"hurwitz", r.is_hurwitz},
              {"spectral_abscissa", num(r.spectral_abscissa)},
              {"output_controllable", r.is_output_controllable},
              {"static_gain", num(r.static_gain)},
              {"eigenvalues", spectrum_json(r.eigenvalues_of_A)},
              {"diagnostic", r.diagnostic}};
}

Json analysis_json(const Scenario& s) {
  Json j;
  j["scenario"] = s.name;
  const auto cl = s.closed_loop();
  const auto model = local_model(s);
  const auto& lf = model.lf;
  j["linearization"] = lf.exact ? "exact" : "equilibrium";
  if (model.newton) {
    j["newton"] = Json{{"state", state_json(cl.network().names(), model.newton->state)},
                       {"residual", num(model.newton->residual)},
                       {"iterations", model.newton->iterations},
                       {"stable", model.newton->stable},
                       {"spectrum", spectrum_json(model.newton->spectrum)}};
  }
  const auto structure = crn::structural_checks(lf);
  j["structure"] = structure_json(structure);
  if (s.hill) j["hill"] = Json{{"theta", num(s.hill->theta)}};

  if (std::isnan(structure.static_gain) || !structure.is_output_controllable) {
    j["equilibria"] = nullptr;
    j["stability"] = Json{{"skipped", "state matrix singular or output not controllable"}};
    return j;
  }
  const auto eq = analysis::equilibria(lf, s.controller);
  j["equilibria"] = Json{{"effective_reference", num(eq.effective_reference)},
                         {"static_gain", num(eq.static_gain)},
                         {"zero", point_json(s, eq.zero)},
                         {"positive", eq.positive ? point_json(s, *eq.positive) : Json(nullptr)}};

  Json st;
  st["zero_spectrum"] = spectrum_json(analysis::zero_equilibrium_spectrum(lf, s.controller));
  if (eq.positive && eq.effective_reference > 0.0) {
    const auto spec = analysis::positive_equilibrium_spectrum(lf, s.controller);
    st["positive_spectrum"] = spectrum_json(spec);
    st["positive_abscissa"] = num(crn::spectral_abscissa(spec));
    st["positive_stable"] = crn::spectral_abscissa(spec) < -crn::kHurwitzMargin;
  }
  if (structure.is_hurwitz && eq.effective_reference > 0.0) {
    const auto ab = analysis::alpha_bar(lf, s.controller.mu);
    st["alpha_bar"] = num(ab.alpha_bar);
    st["omega_star"] = opt_num(ab.omega_star);
    st["weakly_spr"] = ab.weakly_spr;
    st["alpha_below_alpha_bar"] = s.controller.alpha < ab.alpha_bar;
    const auto best = analysis::best_alpha(lf, s.controller.mu);
    st["best_alpha"] = num(best.alpha);
    st["best_abscissa"] = num(best.abscissa);
  } else {
    st["alpha_bar"] = nullptr;
    st["note"] = "alpha_bar requires a Hurwitz state matrix and a positive effective reference";
  }
  j["stability"] = std::move(st);

  if (!s.disturbances.empty()) {
    const auto cl0 = s.closed_loop();
    const auto dm = analysis::disturbance_analysis(lf, s.controller, cl0.disturbance_matrix(),
                                                   cl0.disturbance_amplitudes());
    j["disturbances"] = Json{{"output_shift", num(dm.output_shift)},
                             {"admissible", dm.admissible},
                             {"alpha_bar_d", num(dm.alpha_bar_d)},
                             {"perturbed_positive", dm.perturbed_positive ? point_json(s, *dm.perturbed_positive)
                                                                          : Json(nullptr)}};
  }
  if (s.costs && eq.positive && eq.effective_reference > 0.0) {
    const auto p = analysis::stationary_power(lf, s.controller, *s.costs);
    j["power"] = Json{{"adaptation_cost", num(p.adaptation_cost)},
                      {"constitutive_limit", num(p.constitutive_limit)},
                      {"total", num(p.total)},
                      {"constitutive_bound", num(s.controller.mu * s.costs->kappa_a / eq.static_gain)}};
  }
  return j;
}

Json tracking_json(const std::vector<sim::IntervalTracking>& intervals) {
  Json out = Json::array();
  for (const auto& m : intervals) {
    out.push_back(Json{{"t_begin", num(m.t_begin)},
                       {"t_end", num(m.t_end)},
                       {"setpoint", num(m.setpoint)},
                       {"final_output", num(m.final_output)},
                       {"final_relative_error", num(m.final_relative_error)},
                       {"window_start", num(m.window_start)},
                       {"max_relative_error_after_window", num(m.max_relative_error_after_window)},
                       {"settled", m.settled},
                       {"settling_time", opt_num(m.settling_time)}});
  }
  return out;
}

Json analysis_or_error(const Scenario& s) {
  try {
    return analysis_json(s);
  } catch (const Error& e) {
    return Json{{"error", e.what()}};
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> run_analyze(const Scenario& s, const RunOptions& o) {
  const auto path = join_path(o.out_dir, s.output.report);
  Json report;
  report["command"] = "analyze";
  report["analysis"] = analysis_json(s);
  detail::write_file(path, dump(report));
  return {path};
}

std::vector<std::string> run_simulate(const Scenario& s, const RunOptions& o) {
  const auto cl = s.closed_loop();
  Json report;
  report["command"] = "simulate";
  report["analysis"] = analysis_or_error(s);
  std::vector<std::string> written;
  const auto traj_path = join_path(o.out_dir, s.output.trajectory);

  if (s.simulation.method == SimulationMethod::ssa) {
    sim::SsaOptions so;
    so.volume_scale = s.simulation.volume_scale;
    so.t_end = s.simulation.t_end;
    so.seed = s.simulation.seed;
    so.samples = s.simulation.samples;
    Json run;
    run["method"] = "ssa";
    run["volume_scale"] = num(so.volume_scale);
    run["seed"] = s.simulation.seed;
    if (s.simulation.runs == 1) {
      const auto r = sim::ssa_simulate(cl, so);
      write_trajectory_csv(r.trajectory, traj_path);
      run["events"] = r.events;
      run["extinct"] = r.extinct;
      run["extinction_time"] = opt_num(r.extinction_time);
      run["final_state"] = state_json(r.trajectory.names, r.trajectory.states.back());
    } else {
      const auto e = sim::ssa_ensemble(cl, so, s.simulation.runs, o.threads);
      write_trajectory_csv(e.mean, traj_path);
      run["runs"] = e.runs;
      run["extinct_fraction"] = num(e.extinct_fraction);
      run["final_mean_state"] = state_json(e.mean.names, e.mean.states.back());
    }
    written.push_back(traj_path);
    report["run"] = std::move(run);
  } else {
    const auto traj = sim::integrate(cl, s.schedule, s.simulation.t_end, s.simulation.integrator());
    write_trajectory_csv(traj, traj_path);
    written.push_back(traj_path);
    const auto avg = sim::time_average(traj);
    const auto avg_path = join_path(o.out_dir, s.output.averages);
    write_trajectory_csv(avg, avg_path);
    written.push_back(avg_path);

    Json run;
    run["method"] = "ode";
    run["accepted_steps"] = traj.accepted_steps;
    run["rejected_steps"] = traj.rejected_steps;
    run["min_state"] = num(traj.min_value());
    run["final_state"] = state_json(traj.names, traj.states.back());
    run["final_time_average"] = state_json(traj.names, avg.states.back());
    const auto window_avg = sim::time_average(traj.window(average_start(s), traj.times.back()));
    run["window_average"] = Json{{"from", num(average_start(s))},
                                 {"state", state_json(traj.names, window_avg.states.back())}};
    run["tracking"] = tracking_json(sim::tracking_metrics(traj, cl, s.schedule, s.simulation.settling_fraction));
    const double t_from = average_start(s);
    const auto osc = sim::detect_oscillation(traj, cl.plant().controlled(), t_from);
    run["oscillation"] = Json{{"window_start", num(t_from)},
                              {"amplitude_early", num(osc.amplitude_early)},
                              {"amplitude_late", num(osc.amplitude_late)},
                              {"sustained", osc.sustained}};
    if (s.costs) {
      const auto pt = sim::power_trace(traj, *s.costs, cl, s.schedule);
      run["power"] = Json{{"average", num(pt.average)},
                          {"average_from", num(t_from)},
                          {"long_run_average", num(pt.average_from(t_from))},
                          {"energy", num(pt.energy.back())}};
    }
    report["run"] = std::move(run);
  }
  const auto report_path = join_path(o.out_dir, s.output.report);
  detail::write_file(report_path, dump(report));
  written.push_back(report_path);
  return written;
}

std::vector<std::string> run_compile_dsd(const Scenario& s, const RunOptions& o) {
  if (!s.dsd) throw Error("compile-dsd requires a 'dsd' block in the scenario");
  const auto cl = s.closed_loop();
  const auto circuit = dsd::compile_to_dsd(cl, s.dsd->omega, s.dsd->lambda_fast);
  std::vector<std::string> written;

  const auto net_path = join_path(o.out_dir, s.output.network);
  write_network_file(circuit.network, net_path);
  written.push_back(net_path);

  const auto opts = s.simulation.integrator();
  const auto ideal = sim::integrate(cl, s.schedule, s.simulation.t_end, opts);
  const auto full = dsd::simulate_dsd(circuit, cl, s.schedule, s.simulation.t_end, opts);
  const auto signals = dsd::signal_projection(full, circuit);
  const auto names = circuit.signal_names();
  const auto metrics = dsd::compare_traces(ideal, signals, names, s.dsd->divergence_band);

  const auto cmp_path = join_path(o.out_dir, s.output.comparison);
  write_trajectory_csv(dsd::comparison_table(ideal, signals, names), cmp_path);
  written.push_back(cmp_path);

  const auto gate_path = join_path(o.out_dir, s.output.gate_report);
  detail::write_file(gate_path, dsd::gate_report(circuit, &full));
  written.push_back(gate_path);

  const auto depletion = dsd::gate_depletion(circuit, full);
  Json report;
  report["command"] = "compile-dsd";
  report["circuit"] = Json{{"omega", num(circuit.omega)},
                           {"lambda_fast", num(circuit.lambda_fast)},
                           {"formal_reactions", circuit.mapping.size()},
                           {"expanded_reactions", circuit.network.reactions().size()},
                           {"gates", circuit.gates.size()},
                           {"species", circuit.network.size()}};
  Json cal = Json::object();
  for (const auto& m : circuit.mapping) cal[m.label] = num(m.lambda);
  report["calibration"] = std::move(cal);
  Json dev = Json::object();
  Json rms = Json::object();
  for (std::size_t i = 0; i < metrics.species.size(); ++i) {
    dev[metrics.species[i]] = num(metrics.max_abs_deviation[i]);
    rms[metrics.species[i]] = num(metrics.rms_deviation[i]);
  }
  report["comparison"] = Json{{"band", num(metrics.band)},
                              {"max_abs_deviation", std::move(dev)},
                              {"rms_deviation", std::move(rms)},
                              {"divergence_time", opt_num(metrics.divergence_time)}};
  Json gates = Json::object();
  for (const auto& g : depletion.gates) gates[g.gate] = num(g.min_fraction);
  report["depletion"] = Json{{"threshold", num(dsd::kDepletionThreshold)},
                             {"first_time", opt_num(depletion.first_threshold_time)},
                             {"first_gate", depletion.first_gate},
                             {"min_fraction", std::move(gates)}};
  const auto report_path = join_path(o.out_dir, s.output.report);
  detail::write_file(report_path, dump(report));
  written.push_back(report_path);
  return written;
}

std::vector<std::string> sweep_row(const Scenario& s) {
  const auto cl = s.closed_loop();
  const auto traj = sim::integrate(cl, s.schedule, s.simulation.t_end, s.simulation.integrator());
  const auto tracking = sim::tracking_metrics(traj, cl, s.schedule, s.simulation.settling_fraction);
  const auto& last = tracking.back();
  double p_star = std::numeric_limits<double>::quiet_NaN();
  double alpha_bar = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto model = local_model(s);
    const auto eq = analysis::equilibria(model.lf, s.controller);
    if (s.costs && eq.positive && eq.effective_reference > 0.0) {
      p_star = analysis::stationary_power(model.lf, s.controller, *s.costs).total;
    }
    alpha_bar = analysis::alpha_bar(model.lf, s.controller.mu).alpha_bar;
  } catch (const Error&) {
    // Left as NaN: the row still reports the simulated tracking behavior.
  }
  return {format_number(last.final_relative_error), format_number(last.settling_time.value_or(kInf)),
          format_number(p_star), format_number(alpha_bar)};
}

std::vector<std::string> run_sweep(const Scenario& s, const RunOptions& o) {
  if (s.sweep.empty()) throw Error("sweep requires a 'sweep.parameters' block in the scenario");
  // Cartesian product with the first axis varying slowest.
  std::vector<std::vector<std::string>> tuples{{}};
  for (const auto& axis : s.sweep) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples) {
      for (const auto& v : axis.values) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    }
    tuples = std::move(next);
  }
  // Validate every variant before running any of them.
  std::vector<Scenario> variants;
  for (const auto& t : tuples) {
    std::vector<std::string> overrides;
    for (std::size_t i = 0; i < t.size(); ++i) overrides.push_back(s.sweep[i].path + "=" + t[i]);
    auto doc = apply_overrides(s.document, overrides);
    // Drop the sweep block so the variant validates as a plain scenario.
    auto parsed = detail::parse_text(doc, "sweep variant");
    parsed.erase("sweep");
    variants.push_back(parse_scenario(parsed.dump(), {}, s.base_dir, "sweep variant"));
  }

  std::vector<std::vector<std::string>> rows(variants.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t i = cursor++; i < variants.size(); i = cursor++) {
      try {
        rows[i] = tuples[i];
        for (auto& cell : rows[i]) {
          if (cell.size() >= 2 && cell.front() == '"') cell = cell.substr(1, cell.size() - 2);
        }
        const auto metrics = sweep_row(variants[i]);
        rows[i].insert(rows[i].end(), metrics.begin(), metrics.end());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::size_t threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  threads = std::min(threads, variants.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> header;
  for (const auto& axis : s.sweep) header.push_back(axis.path);
  for (const char* h : {"tracking_error", "settling_time", "P_star", "alpha_bar"}) header.emplace_back(h);
  const auto path = join_path(o.out_dir, s.output.sweep);
  detail::write_file(path, table_csv(header, rows));
  return {path};
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "analyze") return Command::analyze;
  if (name == "simulate") return Command::simulate;
  if (name == "compile-dsd") return Command::compile_dsd;
  if (name == "sweep") return Command::sweep;
  throw Error("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::analyze:
      return "analyze";
    case Command::simulate:
      return "simulate";
    case Command::compile_dsd:
      return "compile-dsd";
    case Command::sweep:
      return "sweep";
  }
  return "";
}

LocalModel local_model(const Scenario& s) {
  LocalModel m;
  const auto cl = s.closed_loop();
  if (s.plant.is_unimolecular()) {
    m.lf = crn::linearize(s.plant, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.plant.size())));
    if (s.hill) m.newton = newton_equilibrium(s, cl);
    return m;
  }
  m.newton = newton_equilibrium(s, cl);
  const auto x = m.newton->state.head(static_cast<Eigen::Index>(s.plant.size()));
  m.lf = crn::linearize(s.plant, x);
  return m;
}

std::string analysis_summary(const Scenario& scenario) { return dump(analysis_json(scenario)); }

std::vector<std::string> run_scenario(Command command, const Scenario& scenario, const RunOptions& options) {
  ensure_dir(options.out_dir);
  switch (command) {
    case Command::analyze:
      return run_analyze(scenario, options);
    case Command::simulate:
      return run_simulate(scenario, options);
    case Command::compile_dsd:
      return run_compile_dsd(scenario, options);
    case Command::sweep:
      return run_sweep(scenario, options);
  }
  return {};
}

}  // namespace crnctl::io
