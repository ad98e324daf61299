#include "crnctl/io/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "crnctl/dsd/circuit.hpp"
#include "crnctl/io/network_json.hpp"
#include "json_util.hpp"

namespace crnctl::io {

using namespace detail;

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (const auto& p : parts) {
    if (p.empty()) throw Error("override path '" + path + "' has an empty component");
  }
  return parts;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

void set_path(Json& root, const std::string& path, Json value) {
  const auto parts = split_path(path);
  Json* node = &root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    const auto& key = parts[i];
    if (node->is_array()) {
      if (!is_index(key)) throw Error("override '" + path + "': '" + key + "' is not an array index");
      const auto idx = std::stoul(key);
      if (idx >= node->size()) throw Error("override '" + path + "': index " + key + " out of range");
      node = &(*node)[idx];
    } else if (node->is_object() || node->is_null()) {
      if (node->is_null()) *node = Json::object();
      node = &(*node)[key];
    } else {
      throw Error("override '" + path + "': cannot descend into a scalar at '" + key + "'");
    }
    if (last) *node = std::move(value);
  }
}

std::string dirname_of(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

controller::ControllerParams parse_controller(const Json& j, const std::string& where,
                                              std::optional<controller::HillParams>& hill, std::string& name) {
  check_keys(j, where, {"mu", "alpha", "k", "v0", "theta", "name"});
  controller::ControllerParams p;
  p.mu = require_number(j, "mu", where);
  p.alpha = require_number(j, "alpha", where);
  p.k = require_number(j, "k", where);
  p.v0 = number_or(j, "v0", where, 1.0);
  if (!(p.mu > 0.0)) fail(child(where, "mu"), "set-point mu must be > 0");
  if (!(p.alpha > 0.0)) fail(child(where, "alpha"), "alpha must be > 0");
  if (!(p.k > 0.0)) fail(child(where, "k"), "gain k must be > 0");
  if (!(p.v0 > 0.0)) fail(child(where, "v0"), "initial controller level v0 must be > 0");
  if (j.contains("theta")) {
    const double theta = get_number(j["theta"], child(where, "theta"));
    if (!(theta > 0.0)) fail(child(where, "theta"), "Hill theta must be > 0");
    hill = controller::HillParams{theta};
  }
  if (j.contains("name")) name = get_string(j["name"], child(where, "name"));
  return p;
}

SimulationSettings parse_simulation(const Json& j, const std::string& where) {
  check_keys(j, where,
             {"t_end", "rtol", "atol", "samples", "seed", "method", "volume_scale", "runs", "average_from",
              "settling_fraction"});
  SimulationSettings s;
  s.t_end = require_number(j, "t_end", where);
  if (!(s.t_end > 0.0)) fail(child(where, "t_end"), "t_end must be > 0");
  s.rtol = number_or(j, "rtol", where, s.rtol);
  s.atol = number_or(j, "atol", where, s.atol);
  if (!(s.rtol > 0.0)) fail(child(where, "rtol"), "must be > 0");
  if (!(s.atol > 0.0)) fail(child(where, "atol"), "must be > 0");
  if (j.contains("samples")) s.samples = get_count(j["samples"], child(where, "samples"));
  if (s.samples < 2) fail(child(where, "samples"), "at least 2 samples are required");
  if (j.contains("seed")) s.seed = get_count(j["seed"], child(where, "seed"));
  if (j.contains("method")) {
    const auto m = get_string(j["method"], child(where, "method"));
    if (m == "ode") {
      s.method = SimulationMethod::ode;
    } else if (m == "ssa") {
      s.method = SimulationMethod::ssa;
    } else {
      fail(child(where, "method"), "expected 'ode' or 'ssa'");
    }
  }
  s.volume_scale = number_or(j, "volume_scale", where, 0.0);
  if (s.method == SimulationMethod::ssa && !(s.volume_scale > 0.0)) {
    fail(child(where, "volume_scale"), "SSA requires volume_scale > 0");
  }
  if (j.contains("runs")) s.runs = get_count(j["runs"], child(where, "runs"));
  if (s.runs == 0) fail(child(where, "runs"), "runs must be >= 1");
  if (j.contains("average_from")) {
    s.average_from = get_number(j["average_from"], child(where, "average_from"));
    if (!(*s.average_from >= 0.0 && *s.average_from < s.t_end)) {
      fail(child(where, "average_from"), "must lie in [0, t_end)");
    }
  }
  s.settling_fraction = number_or(j, "settling_fraction", where, s.settling_fraction);
  if (!(s.settling_fraction > 0.0 && s.settling_fraction < 1.0)) {
    fail(child(where, "settling_fraction"), "must lie in (0, 1)");
  }
  return s;
}

OutputSettings parse_output(const Json& j, const std::string& where) {
  check_keys(j, where, {"trajectory", "report", "averages", "network", "gate_report", "comparison", "sweep"});
  OutputSettings o;
  auto pick = [&](const char* key, std::string& field) {
    if (j.contains(key)) {
      field = get_string(j[key], child(where, key));
      if (field.empty()) fail(child(where, key), "file name must not be empty");
    }
  };
  pick("trajectory", o.trajectory);
  pick("report", o.report);
  pick("averages", o.averages);
  pick("network", o.network);
  pick("gate_report", o.gate_report);
  pick("comparison", o.comparison);
  pick("sweep", o.sweep);
  return o;
}

}  // namespace

sim::IntegratorOptions SimulationSettings::integrator() const {
  sim::IntegratorOptions o;
  o.rtol = rtol;
  o.atol = atol;
  o.samples = samples;
  return o;
}

controller::ClosedLoop Scenario::closed_loop() const {
  return controller::ClosedLoop(plant, controller, hill, disturbances, controller_name);
}

std::string apply_overrides(const std::string& json_text, const std::vector<std::string>& overrides,
                            const std::string& origin) {
  Json root = parse_text(json_text, origin);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("override '" + o + "' must look like path=value");
    const auto path = o.substr(0, eq);
    const auto text = o.substr(eq + 1);
    Json value;
    try {
      value = Json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      value = text;
    }
    set_path(root, path, std::move(value));
  }
  return root.dump(2);
}

Scenario parse_scenario(const std::string& json_text, const std::vector<std::string>& overrides,
                        const std::string& base_dir, const std::string& origin) {
  const auto text = overrides.empty() ? json_text : apply_overrides(json_text, overrides, origin);
  const Json j = parse_text(text, origin);
  check_keys(j, "",
             {"name", "description", "network", "controller", "disturbances", "schedule", "simulation", "dsd",
              "costs", "sweep", "output"});
  Scenario s;
  s.document = j.dump(2);
  s.base_dir = base_dir;
  if (j.contains("name")) s.name = get_string(j["name"], "name");
  if (j.contains("description")) s.description = get_string(j["description"], "description");

  if (!j.contains("network")) fail("network", "missing required block");
  const auto& nj = j["network"];
  require_object(nj, "network");
  if (nj.contains("file")) {
    check_keys(nj, "network", {"file"});
    auto path = std::filesystem::path(get_string(nj["file"], "network.file"));
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    s.plant = read_network_file(path.string());
  } else {
    s.plant = network_from_json(nj, "network");
  }

  if (!j.contains("controller")) fail("controller", "missing required block");
  s.controller = parse_controller(j["controller"], "controller", s.hill, s.controller_name);

  if (j.contains("disturbances")) {
    const auto& dj = j["disturbances"];
    if (!dj.is_array()) fail("disturbances", "expected an array");
    for (std::size_t i = 0; i < dj.size(); ++i) {
      const auto w = item("disturbances", i);
      check_keys(dj[i], w, {"name", "target", "value"});
      controller::Disturbance d;
      d.name = require_string(dj[i], "name", w);
      d.amplitude = number_or(dj[i], "value", w, 0.0);
      if (!(d.amplitude >= 0.0)) fail(child(w, "value"), "disturbance amplitude must be >= 0");
      d.direction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.plant.size()));
      const auto tw = child(w, "target");
      if (!dj[i].contains("target")) fail(tw, "missing required species map");
      require_object(dj[i]["target"], tw);
      for (const auto& [name, weight] : dj[i]["target"].items()) {
        const auto idx = s.plant.index_of(name);
        if (!idx) fail(child(tw, name), "unknown plant species");
        const double e = get_number(weight, child(tw, name));
        if (!(e >= 0.0)) fail(child(tw, name), "disturbance direction must be >= 0");
        d.direction[static_cast<Eigen::Index>(*idx)] = e;
      }
      for (const auto& prev : s.disturbances) {
        if (prev.name == d.name) fail(child(w, "name"), "duplicate disturbance name");
      }
      s.disturbances.push_back(std::move(d));
    }
  }

  controller::ClosedLoop cl = [&] {
    try {
      return s.closed_loop();
    } catch (const Error& e) {
      fail("controller", e.what());
    }
  }();

  if (j.contains("schedule")) {
    const auto& sj = j["schedule"];
    if (!sj.is_array()) fail("schedule", "expected an array");
    std::vector<sim::ScheduleEvent> events;
    for (std::size_t i = 0; i < sj.size(); ++i) {
      const auto w = item("schedule", i);
      check_keys(sj[i], w, {"time", "target", "value"});
      events.push_back({require_number(sj[i], "time", w), require_string(sj[i], "target", w),
                        require_number(sj[i], "value", w)});
      try {
        (void)cl.parameter(events.back().target);
      } catch (const Error& e) {
        fail(child(w, "target"), e.what());
      }
    }
    try {
      s.schedule = sim::Schedule(std::move(events));
      s.schedule.validate(cl);
    } catch (const Error& e) {
      fail("schedule", e.what());
    }
  }

  if (!j.contains("simulation")) fail("simulation", "missing required block");
  s.simulation = parse_simulation(j["simulation"], "simulation");
  if (s.simulation.method == SimulationMethod::ssa) {
    const double omega = s.simulation.volume_scale;
    const auto x0 = cl.initial_state();
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      const double c = x0[i] * omega;
      if (std::abs(c - std::round(c)) > 1e-9 * std::max(1.0, std::abs(c))) {
        fail("simulation.volume_scale", "initial amount of '" + cl.network().species()[static_cast<std::size_t>(i)].name +
                                            "' times volume_scale is not an integer");
      }
    }
    if (!s.schedule.empty()) fail("schedule", "schedules are not supported with the SSA method");
  }

  if (j.contains("dsd")) {
    const auto& dj = j["dsd"];
    check_keys(dj, "dsd", {"omega", "lambda_fast", "divergence_band"});
    DsdSettings d;
    d.omega = require_number(dj, "omega", "dsd");
    if (!(d.omega > 0.0)) fail("dsd.omega", "gate supply omega must be > 0");
    d.lambda_fast = number_or(dj, "lambda_fast", "dsd", d.lambda_fast);
    if (!(d.lambda_fast > 0.0)) fail("dsd.lambda_fast", "must be > 0");
    d.divergence_band = number_or(dj, "divergence_band", "dsd", 0.05 * s.controller.mu);
    if (!(d.divergence_band > 0.0)) fail("dsd.divergence_band", "must be > 0");
    if (s.hill) fail("dsd", "Hill controllers cannot be compiled to DSD");
    try {
      (void)dsd::compile_to_dsd(cl, d.omega, d.lambda_fast);
    } catch (const Error& e) {
      fail("dsd", e.what());
    }
    s.dsd = d;
  }

  if (j.contains("costs")) {
    const auto& cj = j["costs"];
    check_keys(cj, "costs", {"kappa_r", "kappa_m", "kappa_a"});
    analysis::MetabolicCosts c;
    c.kappa_r = number_or(cj, "kappa_r", "costs", 0.0);
    c.kappa_m = number_or(cj, "kappa_m", "costs", 0.0);
    c.kappa_a = number_or(cj, "kappa_a", "costs", 0.0);
    try {
      c.validate();
    } catch (const Error& e) {
      fail("costs", e.what());
    }
    s.costs = c;
  }

  if (j.contains("sweep")) {
    const auto& wj = j["sweep"];
    check_keys(wj, "sweep", {"parameters"});
    if (!wj.contains("parameters")) fail("sweep.parameters", "missing required object");
    const auto& pj = wj["parameters"];
    require_object(pj, "sweep.parameters");
    for (const auto& [path, values] : pj.items()) {
      const auto w = child("sweep.parameters", path);
      if (!values.is_array() || values.empty()) fail(w, "expected a nonempty array of values");
      if (path.starts_with("sweep")) fail(w, "a sweep cannot modify itself");
      SweepAxis axis{path, {}};
      for (const auto& v : values) axis.values.push_back(v.dump());
      s.sweep.push_back(std::move(axis));
    }
  }

  if (j.contains("output")) s.output = parse_output(j["output"], "output");
  return s;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  return parse_scenario(read_file(path), overrides, dirname_of(path), path);
}

}  // namespace crnctl::io
