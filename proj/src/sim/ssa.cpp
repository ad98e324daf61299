#include "crnctl/sim/ssa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "crnctl/error.hpp"

namespace crnctl::sim {

namespace {

constexpr double kMaxCount = 9007199254740992.0;  // 2^53

struct CompiledReaction {
  double rate;
  std::vector<std::pair<std::size_t, int>> reactants;
  std::vector<std::pair<std::size_t, double>> changes;
  double theta = 0.0;
  std::size_t repressor = 0;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void SsaOptions::validate() const {
  if (!(volume_scale > 0.0) || !std::isfinite(volume_scale)) throw Error("volume_scale must be > 0");
  if (!(t_end > 0.0)) throw Error("t_end must be > 0");
  if (samples < 2) throw Error("SSA needs at least 2 output samples");
}

SsaResult ssa_simulate(const crn::Network& network, std::size_t watched_species, const SsaOptions& options) {
  options.validate();
  const std::size_t n = network.size();
  if (watched_species >= n) throw Error("watched species out of range");
  const double omega = options.volume_scale;

  std::vector<double> counts(n);
  const auto x0 = network.initial_state();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = x0[static_cast<Eigen::Index>(i)] * omega;
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9 * std::max(1.0, std::abs(c)) || r < 0.0) {
      throw Error("initial count of '" + network.species()[i].name + "' is not a nonnegative integer (" +
                  std::to_string(c) + ")");
    }
    counts[i] = r;
  }

  std::vector<CompiledReaction> reactions;
  for (const auto& r : network.reactions()) {
    CompiledReaction cr;
    std::map<std::size_t, int> reactants;
    std::map<std::size_t, int> delta;
    for (const auto& s : r.reactants) {
      reactants[s.species] += s.count;
      delta[s.species] -= s.count;
    }
    for (const auto& s : r.products) delta[s.species] += s.count;
    cr.rate = r.rate_constant * std::pow(omega, 1.0 - r.order());
    for (const auto& [sp, m] : reactants) cr.reactants.emplace_back(sp, m);
    for (const auto& [sp, d] : delta) {
      if (d != 0) cr.changes.emplace_back(sp, static_cast<double>(d));
    }
    if (r.hill) {
      cr.theta = r.hill->theta;
      cr.repressor = r.hill->repressor;
    }
    reactions.push_back(std::move(cr));
  }
  // Constant inflow becomes zeroth-order birth reactions.
  const auto& inflow = network.inflow();
  for (std::size_t i = 0; i < n; ++i) {
    const double q = inflow.size() ? inflow[static_cast<Eigen::Index>(i)] : 0.0;
    if (q > 0.0) reactions.push_back(CompiledReaction{q * omega, {}, {{i, 1.0}}});
  }

  auto propensity = [&](const CompiledReaction& r) {
    double a = r.rate;
    for (const auto& [sp, m] : r.reactants) {
      for (int j = 0; j < m; ++j) a *= std::max(counts[sp] - j, 0.0);
    }
    if (r.theta > 0.0) a *= r.theta / (r.theta + counts[r.repressor] / omega);
    return a;
  };

  SsaResult result;
  result.trajectory.names = network.names();
  const auto grid = uniform_grid(0.0, options.t_end, options.samples);
  result.trajectory.times = grid;
  result.trajectory.states.reserve(grid.size());
  std::size_t next = 0;
  auto snapshot = [&]() {
    Eigen::VectorXd s(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) s[static_cast<Eigen::Index>(i)] = counts[i] / omega;
    return s;
  };

  if (counts[watched_species] == 0.0) {
    result.extinct = true;
    result.extinction_time = 0.0;
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> a(reactions.size());
  double t = 0.0;
  while (true) {
    double a0 = 0.0;
    for (std::size_t r = 0; r < reactions.size(); ++r) {
      a[r] = propensity(reactions[r]);
      a0 += a[r];
    }
    double t_next = std::numeric_limits<double>::infinity();
    if (a0 > 0.0) t_next = t - std::log(1.0 - uniform01(rng)) / a0;
    while (next < grid.size() && grid[next] < t_next) {
      result.trajectory.states.push_back(snapshot());
      ++next;
    }
    if (next >= grid.size()) break;
    if (++result.events > options.max_events) throw Error("SSA exceeded the maximum number of events");
    t = t_next;
    const double target = uniform01(rng) * a0;
    double acc = 0.0;
    std::size_t chosen = reactions.size() - 1;
    for (std::size_t r = 0; r < reactions.size(); ++r) {
      acc += a[r];
      if (target < acc) {
        chosen = r;
        break;
      }
    }
    while (a[chosen] == 0.0 && chosen > 0) --chosen;  // guard against rounding at the upper end
    for (const auto& [sp, d] : reactions[chosen].changes) {
      counts[sp] += d;
      if (counts[sp] > kMaxCount) throw Error("SSA copy number overflow");
    }
    if (!result.extinct && counts[watched_species] == 0.0) {
      result.extinct = true;
      result.extinction_time = t;
    }
  }
  return result;
}

SsaResult ssa_simulate(const controller::ClosedLoop& closed_loop, const SsaOptions& options) {
  return ssa_simulate(closed_loop.network(), closed_loop.controller_index(), options);
}

SsaEnsemble ssa_ensemble(const controller::ClosedLoop& closed_loop, const SsaOptions& options, std::size_t runs,
                         std::size_t threads) {
  if (runs == 0) throw Error("ensemble needs at least one run");
  options.validate();
  std::vector<SsaResult> results(runs);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t i = cursor++; i < runs; i = cursor++) {
      try {
        auto opts = options;
        opts.seed = options.seed + i;
        results[i] = ssa_simulate(closed_loop, opts);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, runs);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  SsaEnsemble ens;
  ens.runs = runs;
  ens.mean = results.front().trajectory;
  std::size_t extinct = results.front().extinct ? 1 : 0;
  for (std::size_t i = 1; i < runs; ++i) {
    for (std::size_t s = 0; s < ens.mean.states.size(); ++s) ens.mean.states[s] += results[i].trajectory.states[s];
    if (results[i].extinct) ++extinct;
  }
  for (auto& s : ens.mean.states) s /= static_cast<double>(runs);
  ens.extinct_fraction = static_cast<double>(extinct) / static_cast<double>(runs);
  return ens;
}

}  // namespace crnctl::sim
