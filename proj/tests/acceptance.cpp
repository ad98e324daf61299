#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crnctl/analysis/newton.hpp"
#include "crnctl/analysis/power.hpp"
#include "crnctl/analysis/stability.hpp"
#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linear_form.hpp"
#include "crnctl/dsd/circuit.hpp"
#include "crnctl/dsd/compare.hpp"
#include "crnctl/io/scenario.hpp"
#include "crnctl/sim/averages.hpp"
#include "crnctl/sim/integrator.hpp"
#include "crnctl/sim/ssa.hpp"
#include "crnctl/sim/tracking.hpp"
#include "support.hpp"

namespace an = crnctl::analysis;
namespace crn = crnctl::crn;
namespace ctl = crnctl::controller;
namespace dsd = crnctl::dsd;
namespace io = crnctl::io;
namespace sim = crnctl::sim;
namespace ct = crnctl::testing;

namespace {

/// Outcome of one criterion: pass flag plus a one-line account of the measured values.
struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

crn::LinearForm gene_lf() { return crn::linearize(ct::gene_expression(), crn::State::Zero(3)); }

sim::Trajectory simulate(const io::Scenario& s) {
  return sim::integrate(s.closed_loop(), s.schedule, s.simulation.t_end, s.simulation.integrator());
}

/// Intervals that begin at a schedule event, i.e. the responses to each step change.
std::vector<sim::IntervalTracking> step_responses(const io::Scenario& s, const sim::Trajectory& traj) {
  auto all = sim::tracking_metrics(traj, s.closed_loop(), s.schedule, s.simulation.settling_fraction);
  if (!all.empty()) all.erase(all.begin());
  return all;
}

void criterion_1(Verdict& v) {
  const auto t0 = Clock::now();
  const auto lf = gene_lf();
  const double a2 = an::alpha_bar(lf, 2.0).alpha_bar;
  const double a4 = an::alpha_bar(lf, 4.0).alpha_bar;
  const double a1 = an::alpha_bar(lf, 1.0).alpha_bar;
  const double dt = seconds_since(t0);
  v.detail << "alpha_bar(mu=2)=" << a2 << " alpha_bar(mu=4)=" << a4 << " alpha_bar(mu=1)=" << a1 << " runtime=" << dt << "s";
  v.require(std::abs(a2 - 0.84) <= 0.01, "mu=2 within 0.84 +- 0.01");
  v.require(std::abs(a4 - 0.42) <= 0.005, "mu=4 within 0.42 +- 0.005");
  v.require(std::abs(a1 - 1.68) <= 0.02, "mu=1 within 1.68 +- 0.02");
  v.require(dt < 1.0, "runtime < 1 s");
}

void criterion_2(Verdict& v) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20170701);
  std::uniform_real_distribution<double> mu_dist(0.5, 4.0);
  int finite = 0, infinite = 0, agree = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + i % 6;
    const auto lf = crn::make_linear_form(ct::random_hurwitz_metzler(d, rng), Eigen::VectorXd::Zero(d),
                                          Eigen::VectorXd::Unit(d, 0), Eigen::RowVectorXd::Unit(d, d - 1));
    const double mu = mu_dist(rng);
    const double got = an::alpha_bar(lf, mu).alpha_bar;
    const double expected = ct::alpha_bar_by_bisection(lf.A, lf.B, lf.C, mu);
    if (std::isinf(expected) || std::isinf(got)) {
      ++infinite;
      if (std::isinf(expected) && std::isinf(got)) ++agree;
      else worst = std::numeric_limits<double>::infinity();
      continue;
    }
    ++finite;
    const double rel = ct::relative_difference(got, expected);
    worst = std::max(worst, rel);
    if (rel <= 1e-6) ++agree;
  }
  const double dt = seconds_since(t0);
  v.detail << "triplets=50 finite=" << finite << " infinite=" << infinite << " agree=" << agree
           << " worst_rel=" << worst << " runtime=" << dt << "s";
  v.require(agree == 50, "all 50 agree within 1e-6 relative");
  v.require(dt < 30.0, "runtime < 30 s");
}

void criterion_3(Verdict& v) {
  const auto s = io::load_scenario(ct::scenario_path("fig3b"));
  const auto t0 = Clock::now();
  const auto traj = simulate(s);
  const double dt = seconds_since(t0);
  const auto metrics = sim::tracking_metrics(traj, s.closed_loop(), s.schedule);
  for (const auto& m : metrics) {
    v.detail << "mu=" << m.setpoint << ":q(" << m.t_end << "-)=" << m.final_output << " ";
    v.require(m.final_relative_error < 0.01, "|q - mu| < 1% mu before t=" + std::to_string(m.t_end));
  }
  v.detail << "runtime=" << dt << "s";
  v.require(metrics.size() == 3, "three set-point intervals");
  v.require(dt < 1.0, "runtime < 1 s");
}

void criterion_4(Verdict& v) {
  for (const auto* name : {"fig3c", "fig3d", "fig3e"}) {
    const auto s = io::load_scenario(ct::scenario_path(name));
    const auto traj = simulate(s);
    for (const auto& m : step_responses(s, traj)) {
      v.detail << name << "[t=" << m.t_begin << "]: max_err_after_window=" << m.max_relative_error_after_window
               << " settling=" << (m.settling_time ? std::to_string(*m.settling_time) : std::string("none"))
               << " window=" << (m.window_start - m.t_begin) << "; ";
      v.require(m.settled, std::string(name) + " step at t=" + std::to_string(m.t_begin) +
                               " settles within 1% mu inside the settling window");
    }
  }
}

void criterion_5(Verdict& v) {
  const auto s = io::load_scenario(ct::scenario_path("fig2b"));
  const auto traj = simulate(s);
  const double t_from = *s.simulation.average_from;
  const auto q = traj.require_column("q");
  const auto vc = traj.require_column("v");
  const auto osc = sim::detect_oscillation(traj, q, t_from);
  const auto avg = sim::time_average(traj.window(t_from, s.simulation.t_end)).states.back();
  const double mu = 4.0;
  const double v_star = mu / (ct::gene_gain() * s.controller.k);
  const double eq = std::abs(avg[static_cast<Eigen::Index>(q)] - mu) / mu;
  const double ev = std::abs(avg[static_cast<Eigen::Index>(vc)] - v_star) / v_star;
  v.detail << "alpha_bar(4)=" << an::alpha_bar(gene_lf(), mu).alpha_bar << " amplitude_late=" << osc.amplitude_late
           << " avg_q=" << avg[static_cast<Eigen::Index>(q)] << " (err " << eq << ") avg_v=" << avg[static_cast<Eigen::Index>(vc)]
           << " v*=" << v_star << " (err " << ev << ")";
  v.require(osc.sustained, "sustained oscillation");
  v.require(eq < 0.02, "time-average of q within 2% of mu");
  v.require(ev < 0.02, "time-average of v within 2% of v*");
}

void criterion_6(Verdict& v) {
  for (const auto* name : {"dimer_tracking", "dimer_adaptation"}) {
    const auto s = io::load_scenario(ct::scenario_path(name));
    const auto traj = simulate(s);
    double worst = 0.0;
    for (const auto& m : sim::tracking_metrics(traj, s.closed_loop(), s.schedule)) {
      worst = std::max(worst, m.max_relative_error_after_window);
      v.require(m.settled, std::string(name) + " interval at t=" + std::to_string(m.t_begin) + " within 1% mu");
    }
    v.detail << name << ": max_err_after_window=" << worst << "; ";
  }
  const ct::DimerRates r;
  const double mu = 2.0, k = 10.0;
  const auto cl = ctl::attach_integral_controller(ct::dimerization(r), {mu, 0.2, k, 1.0});
  const auto newton = an::solve_equilibrium_nonlinear(cl, Eigen::Vector3d(1.0, 1.0, 1.0));
  const Eigen::Vector3d expected = ct::dimer_equilibrium(r, mu, k);
  const double err = (newton.state - expected).cwiseAbs().maxCoeff();
  v.detail << "newton=(" << newton.state[0] << ", " << newton.state[1] << ", " << newton.state[2]
           << ") closed_form_err=" << err << " stable=" << newton.stable;
  v.require(err < 1e-8, "Newton equilibrium matches closed form to 1e-8");
  v.require(newton.stable, "dimer equilibrium locally stable at alpha = 0.2");
}

void criterion_7(Verdict& v) {
  const std::vector<double> ks{0.1, 1.0, 10.0, 100.0};
  double gene_worst = 0.0, dimer_worst = 0.0;
  const auto lf = gene_lf();
  std::vector<crn::Spectrum> gene, dimer;
  for (double k : ks) {
    gene.push_back(an::positive_equilibrium_spectrum(lf, {2.0, 0.3, k, 1.0}));
    const auto cl = ctl::attach_integral_controller(ct::dimerization(), {2.0, 0.2, k, 1.0});
    const auto eq = an::solve_equilibrium_nonlinear(cl, ct::dimer_equilibrium({}, 2.0, k));
    dimer.push_back(eq.spectrum);
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = i + 1; j < ks.size(); ++j) {
      gene_worst = std::max(gene_worst, crn::spectrum_distance(gene[i], gene[j]));
      dimer_worst = std::max(dimer_worst, crn::spectrum_distance(dimer[i], dimer[j]));
    }
  }
  v.detail << "gene_expression max_pairwise=" << gene_worst << " dimerization max_pairwise=" << dimer_worst;
  v.require(gene_worst < 1e-8, "gene-expression spectra identical within 1e-8");
  v.require(dimer_worst < 1e-8, "dimerization spectra identical within 1e-8");
}

void criterion_8(Verdict& v) {
  const auto s = io::load_scenario(ct::scenario_path("power"));
  const auto traj = simulate(s);
  const auto trace = sim::power_trace(traj, *s.costs, s.closed_loop(), s.schedule);
  const double simulated = trace.average_from(*s.simulation.average_from);
  const auto p_star = an::stationary_power(gene_lf(), s.controller, *s.costs);
  const double err = std::abs(simulated - p_star.total) / p_star.total;
  v.detail << "gene: simulated=" << simulated << " P*=" << p_star.total << " (err " << err << "); ";
  v.require(err < 0.01, "gene-expression long-run power within 1% of P*");

  const ctl::ControllerParams dp{2.0, 0.2, 10.0, 1.0};
  const auto dcl = ctl::attach_integral_controller(ct::dimerization(), dp);
  sim::IntegratorOptions opts;
  opts.samples = 3001;
  const auto dtraj = sim::integrate(dcl, {}, 300.0, opts);
  const double dsim = sim::power_trace(dtraj, *s.costs, dcl).average_from(150.0);
  const double dstar = an::stationary_power_from_input(dp.k * ct::dimer_equilibrium({}, dp.mu, dp.k)[2], dp, *s.costs).total;
  const double derr = std::abs(dsim - dstar) / dstar;
  v.detail << "dimer: simulated=" << dsim << " P*=" << dstar << " (err " << derr << "); ";
  v.require(derr < 0.01, "dimerization long-run power within 1% of P*");

  double previous = std::numeric_limits<double>::infinity();
  const double floor = s.controller.mu * s.costs->kappa_a / ct::gene_gain();
  bool monotone = true, bounded = true;
  v.detail << "sweep k:";
  for (double k : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    auto params = s.controller;
    params.k = k;
    const double total = an::stationary_power(gene_lf(), params, *s.costs).total;
    v.detail << " " << k << "->" << total;
    monotone = monotone && total < previous;
    bounded = bounded && total > floor;
    previous = total;
  }
  v.detail << " floor=" << floor;
  v.require(monotone, "P* strictly decreasing in k");
  v.require(bounded, "P* above mu kappa_a / g");
}

void criterion_9(Verdict& v) {
  const auto s = io::load_scenario(ct::scenario_path("hill"));
  const auto cl = s.closed_loop();
  const double gamma = s.plant.reactions()[0].rate_constant;
  const double rho = ctl::hill_rho(*s.hill, s.controller, gamma);
  const double x_ideal = s.controller.mu, v_ideal = s.controller.mu * gamma / s.controller.k;
  const auto eq = an::solve_equilibrium_nonlinear(cl, Eigen::Vector2d(x_ideal, v_ideal));
  const double ex = std::abs(eq.state[0] - x_ideal) / x_ideal;
  const double ev = std::abs(eq.state[1] - v_ideal) / v_ideal;
  v.detail << "rho=" << rho << " x*=" << eq.state[0] << " (err " << ex << ") v*=" << eq.state[1] << " (err " << ev << ");";
  v.require(std::abs(rho - 500.0) < 1e-9, "rho = 500");
  v.require(ex < 0.005 && ev < 0.005, "equilibrium within 0.5% of (mu, mu gamma / k)");

  sim::IntegratorOptions opts;
  opts.samples = 2001;
  const auto ideal = sim::integrate(ctl::attach_integral_controller(s.plant, s.controller), {}, s.simulation.t_end, opts);
  double previous = std::numeric_limits<double>::infinity();
  v.detail << " gap:";
  for (double theta : {1e2, 1e4, 1e6}) {
    const auto hill = sim::integrate(ctl::attach_hill_controller(s.plant, s.controller, {theta}), {}, s.simulation.t_end, opts);
    double gap = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) gap = std::max(gap, (ideal.states[i] - hill.states[i]).cwiseAbs().maxCoeff());
    v.detail << " theta=" << theta << "->" << gap;
    v.require(gap < previous, "trajectory gap decreasing in theta");
    previous = gap;
  }
}

void criterion_10(Verdict& v) {
  for (const auto* name : {"fig5a", "fig5b", "fig5d"}) {
    const auto s = io::load_scenario(ct::scenario_path(name));
    const auto t0 = Clock::now();
    const auto cl = s.closed_loop();
    const auto circuit = dsd::compile_to_dsd(cl, s.dsd->omega, s.dsd->lambda_fast);
    const auto opts = s.simulation.integrator();
    const auto ideal = sim::integrate(cl, s.schedule, s.simulation.t_end, opts);
    const auto full = dsd::simulate_dsd(circuit, cl, s.schedule, s.simulation.t_end, opts);
    const auto metrics = dsd::compare_traces(ideal, dsd::signal_projection(full, circuit), {"x", "v"}, s.dsd->divergence_band);
    const double dt = seconds_since(t0);
    v.detail << name << ": omega=" << s.dsd->omega << " max_dev_x=" << metrics.max_deviation_of("x")
             << " max_dev_v=" << metrics.max_deviation_of("v") << " divergence="
             << (metrics.divergence_time ? std::to_string(*metrics.divergence_time) : std::string("none")) << " runtime=" << dt
             << "s; ";
    if (std::string(name) == "fig5d") {
      v.require(metrics.divergence_time.has_value(), "fig5d divergence time is finite");
    } else {
      const double scale = 0.05 * s.controller.mu;
      v.require(metrics.max_deviation_of("x") < scale && metrics.max_deviation_of("v") < scale,
                std::string(name) + " X and V within 5% of mu");
    }
    v.require(dt < 10.0, std::string(name) + " runtime < 10 s");
  }
}

void criterion_11(Verdict& v) {
  {
    const auto s = io::load_scenario(ct::scenario_path("ssa_small"));
    const auto cl = s.closed_loop();
    sim::SsaOptions opts;
    opts.volume_scale = s.simulation.volume_scale;
    opts.t_end = s.simulation.t_end;
    opts.samples = s.simulation.samples;
    std::size_t extinct = 0;
    bool absorbing = true, decaying = true;
    const auto x = cl.plant().controlled();
    const auto vi = static_cast<Eigen::Index>(cl.controller_index());
    for (std::size_t i = 0; i < s.simulation.runs; ++i) {
      opts.seed = s.simulation.seed + i;
      const auto res = sim::ssa_simulate(cl, opts);
      if (!res.extinct) continue;
      ++extinct;
      const auto& traj = res.trajectory;
      const double at_extinction = traj.at(*res.extinction_time)[static_cast<Eigen::Index>(x)];
      for (std::size_t k = 0; k < traj.size(); ++k)
        if (traj.times[k] >= *res.extinction_time && traj.states[k][vi] != 0.0) absorbing = false;
      // Once V is gone only degradation acts on X, so X is nonincreasing and decays.
      double previous = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] < *res.extinction_time) continue;
        if (traj.states[k][static_cast<Eigen::Index>(x)] > previous) decaying = false;
        previous = traj.states[k][static_cast<Eigen::Index>(x)];
      }
      if (opts.t_end - *res.extinction_time > 20.0 && at_extinction > 0.0 &&
          traj.states.back()[static_cast<Eigen::Index>(x)] >= at_extinction)
        decaying = false;
    }
    v.detail << "small: extinct " << extinct << "/" << s.simulation.runs << " absorbing=" << absorbing
             << " output_decays=" << decaying << "; ";
    v.require(extinct > 0, "nonzero fraction of runs reaches V = 0");
    v.require(absorbing, "V stays at 0 after extinction");
    v.require(decaying, "output decays after extinction");
  }
  {
    const auto s = io::load_scenario(ct::scenario_path("ssa_large"));
    const auto cl = s.closed_loop();
    sim::SsaOptions opts;
    opts.volume_scale = s.simulation.volume_scale;
    opts.t_end = s.simulation.t_end;
    opts.samples = s.simulation.samples;
    opts.seed = s.simulation.seed;
    const auto ens = sim::ssa_ensemble(cl, opts, s.simulation.runs);
    sim::IntegratorOptions iopts;
    iopts.samples = s.simulation.samples;
    const auto ode = sim::integrate(cl, {}, s.simulation.t_end, iopts);
    double worst = 0.0;
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(cl.dimension()); ++c) {
      double scale = 0.0, gap = 0.0;
      for (std::size_t k = 0; k < ode.size(); ++k) {
        scale = std::max(scale, std::abs(ode.states[k][c]));
        gap = std::max(gap, std::abs(ens.mean.at(ode.times[k])[c] - ode.states[k][c]));
      }
      worst = std::max(worst, gap / scale);
    }
    v.detail << "large: molecules/unit=" << s.simulation.volume_scale << " runs=" << ens.runs
             << " max_rel_gap_to_ode=" << worst;
    v.require(worst < 0.05, "SSA mean within 5% of the ODE");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"alpha_bar reproduction", criterion_1},
      {"oracle equivalence of alpha_bar", criterion_2},
      {"set-point tracking (gene expression)", criterion_3},
      {"perfect adaptation to step disturbances", criterion_4},
      {"oscillatory time-averages", criterion_5},
      {"dimerization tracking, adaptation and equilibrium", criterion_6},
      {"k-invariance of positive-equilibrium spectra", criterion_7},
      {"metabolic power", criterion_8},
      {"Hill controller", criterion_9},
      {"DSD fidelity", criterion_10},
      {"stochastic failure and large-volume agreement", criterion_11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double dt = seconds_since(t0);
    if (!v.pass) ++failures;
    std::printf("%s %2zu %s (%.2fs): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), dt,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
