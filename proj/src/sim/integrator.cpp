#include "crnctl/sim/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "crnctl/crn/kinetics.hpp"
#include "crnctl/error.hpp"

namespace crnctl::sim {

namespace {

using Vec = Eigen::VectorXd;

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

/// Dense output weights: b_i(theta) = sum_j P[i][j] theta^(j+1).
constexpr std::array<std::array<double, 4>, 7> kDense = {{
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
}};

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2;  // h shrinks by at most 1/kMinFactor per step
constexpr double kMaxGrowth = 10.0;

class Stepper {
 public:
  Stepper(const crn::Network& network, const IntegratorOptions& options)
      : kinetics_(network), opts_(options), n_(static_cast<Eigen::Index>(network.size())) {
    for (auto& k : k_) k.resize(n_);
    tmp_.resize(n_);
    y1_.resize(n_);
  }

  /// Integrates from (t0, y) to t1, emitting grid samples in [t0, t1] through `emit`.
  template <class Emit, class Record>
  void run(double t0, double t1, Vec& y, Emit&& emit, Record&& record, Trajectory& stats) {
    double t = t0;
    f(y, k_[0]);
    double h = initial_step(t0, t1, y);
    double facold = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;
    while (t < t1) {
      if (++steps > opts_.max_steps) throw Error("integrator exceeded the maximum number of steps");
      const double room = t1 - t;
      bool final_step = false;
      if (h >= room || (room - h) <= 1e-12 * std::max(1.0, std::abs(t1))) {
        h = room;
        final_step = true;
      }
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "step-size underflow at t=" << t;
        throw Error(msg.str());
      }

      const double err = attempt(y, h);
      const bool finite = std::isfinite(err) && y1_.allFinite();
      double undershoot = 0.0;
      if (finite) undershoot = y1_.minCoeff();

      if (!finite) {
        ++stats.rejected_steps;
        h *= 0.1;
        last_rejected = true;
        continue;
      }
      if (err > 1.0 || undershoot < -opts_.atol) {
        ++stats.rejected_steps;
        if (err > 1.0) {
          const double fac11 = std::pow(err, kExpo);
          h /= std::min(1.0 / kMinFactor, fac11 / kSafety);
        } else {
          h *= 0.5;
        }
        last_rejected = true;
        continue;
      }

      // Accepted.
      ++stats.accepted_steps;
      const double t_new = final_step ? t1 : t + h;
      emit(t, t_new, h, y, k_);
      bool clipped = false;
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (y1_[i] < 0.0) {
          y1_[i] = 0.0;
          clipped = true;
        }
      }
      y = y1_;
      if (clipped) {
        f(y, k_[0]);
      } else {
        k_[0] = k_[6];
      }
      t = t_new;
      record(t, y);

      const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrowth, 1.0 / kMinFactor);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      facold = std::max(err, 1e-4);
      last_rejected = false;
      if (opts_.max_step > 0.0) h_new = std::min(h_new, opts_.max_step);
      h = h_new;
    }
  }

 private:
  void f(const Vec& x, Vec& out) { kinetics_.rhs(x, out); }

  double norm(const Vec& v, const Vec& y) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double sc = opts_.atol + opts_.rtol * std::abs(y[i]);
      const double r = v[i] / sc;
      s += r * r;
    }
    return n_ > 0 ? std::sqrt(s / static_cast<double>(n_)) : 0.0;
  }

  double initial_step(double t0, double t1, const Vec& y0) {
    const double span = t1 - t0;
    const double d0 = norm(y0, y0);
    const double d1 = norm(k_[0], y0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    tmp_ = y0 + h0 * k_[0];
    for (Eigen::Index i = 0; i < n_; ++i) tmp_[i] = std::max(tmp_[i], 0.0);
    f(tmp_, k_[1]);
    const double d2 = norm(k_[1] - k_[0], y0) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    double h = std::min(100.0 * h0, h1);
    h = std::min(h, span);
    if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
    return h;
  }

  /// One trial step of size h from y; fills k_[1..6] and y1_ and returns the scaled error.
  double attempt(const Vec& y, double h) {
    // Intermediate stage states can dip slightly below zero; evaluate at the
    // clipped point so polynomial rate laws stay well defined.
    auto stage = [&](Vec& out) {
      for (Eigen::Index i = 0; i < n_; ++i) tmp_[i] = std::max(tmp_[i], 0.0);
      f(tmp_, out);
    };
    tmp_ = y + h * a21 * k_[0];
    stage(k_[1]);
    tmp_ = y + h * (a31 * k_[0] + a32 * k_[1]);
    stage(k_[2]);
    tmp_ = y + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    stage(k_[3]);
    tmp_ = y + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    stage(k_[4]);
    tmp_ = y + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    stage(k_[5]);
    y1_ = y + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
    tmp_ = y1_;
    stage(k_[6]);
    const Vec err = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(y1_[i]));
      const double r = err[i] / sc;
      s += r * r;
    }
    return n_ > 0 ? std::sqrt(s / static_cast<double>(n_)) : 0.0;
  }

  crn::Kinetics kinetics_;
  IntegratorOptions opts_;
  Eigen::Index n_;
  std::array<Vec, 7> k_;
  Vec tmp_;
  Vec y1_;
};

Vec dense(double theta, double h, const Vec& y0, const std::array<Vec, 7>& k) {
  Vec out = y0;
  for (std::size_t i = 0; i < 7; ++i) {
    double w = 0.0;
    double p = theta;
    for (std::size_t j = 0; j < 4; ++j) {
      w += kDense[i][j] * p;
      p *= theta;
    }
    if (w != 0.0) out += h * w * k[i];
  }
  return out;
}

}  // namespace

void IntegratorOptions::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw Error("integrator tolerances must be > 0");
  if (samples < 2) throw Error("integrator needs at least 2 output samples");
  if (max_step < 0.0) throw Error("max_step must be >= 0");
  if (max_steps == 0) throw Error("max_steps must be > 0");
}

Trajectory integrate_segments(const std::vector<Segment>& segments, const crn::State& x0,
                              const IntegratorOptions& options) {
  options.validate();
  if (segments.empty()) throw Error("integration needs at least one segment");
  const auto n = segments.front().network.size();
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (seg.network.size() != n) throw Error("segments must share the same species");
    if (!(seg.t_end > seg.t_begin)) throw Error("segment end must exceed its start");
    if (s > 0 && seg.t_begin != segments[s - 1].t_end) throw Error("segments must be contiguous");
  }
  if (static_cast<std::size_t>(x0.size()) != n) throw Error("initial state has wrong dimension");
  if (!x0.allFinite()) throw Error("initial state is not finite");
  if (x0.minCoeff() < 0.0) throw Error("initial state must be nonnegative");

  Trajectory traj;
  traj.names = segments.front().network.names();
  const double t_begin = segments.front().t_begin;
  const double t_final = segments.back().t_end;
  const auto grid = uniform_grid(t_begin, t_final, options.samples);
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  std::size_t next = 0;

  traj.times.push_back(grid[0]);
  traj.states.push_back(x0);
  next = 1;
  if (options.keep_steps) {
    traj.step_times.push_back(t_begin);
    traj.step_states.push_back(x0);
  }

  Vec y = x0;
  for (const auto& seg : segments) {
    Stepper stepper(seg.network, options);
    auto emit = [&](double t0, double t1, double h, const Vec& y0, const std::array<Vec, 7>& k) {
      while (next < grid.size() && grid[next] <= t1) {
        const double theta = std::clamp((grid[next] - t0) / h, 0.0, 1.0);
        Vec s = dense(theta, h, y0, k);
        for (Eigen::Index i = 0; i < s.size(); ++i) {
          if (s[i] < 0.0) s[i] = s[i] < -options.atol ? s[i] : 0.0;
        }
        traj.times.push_back(grid[next]);
        traj.states.push_back(std::move(s));
        ++next;
      }
    };
    auto record = [&](double t, const Vec& state) {
      if (options.keep_steps) {
        traj.step_times.push_back(t);
        traj.step_states.push_back(state);
      }
    };
    stepper.run(seg.t_begin, seg.t_end, y, emit, record, traj);
    if (!y.allFinite()) throw Error("non-finite state during integration");
  }
  while (next < grid.size()) {
    traj.times.push_back(grid[next]);
    traj.states.push_back(y);
    ++next;
  }
  for (const auto& s : traj.states) {
    if (!s.allFinite()) throw Error("non-finite state during integration");
    if (s.minCoeff() < -options.atol) throw Error("state undershoot below -atol in dense output");
  }
  return traj;
}

Trajectory integrate(const crn::Network& network, const crn::State& x0, double t_end,
                     const IntegratorOptions& options) {
  if (!(t_end > 0.0)) throw Error("t_end must be > 0");
  return integrate_segments({Segment{0.0, t_end, network}}, x0, options);
}

std::vector<Segment> schedule_segments(const controller::ClosedLoop& closed_loop, const Schedule& schedule,
                                       double t_end) {
  if (!(t_end > 0.0)) throw Error("t_end must be > 0");
  schedule.validate(closed_loop);
  std::vector<Segment> segments;
  double start = 0.0;
  auto current = schedule.state_at(closed_loop, 0.0);
  for (const auto& e : schedule.events()) {
    if (e.time <= 0.0) continue;
    if (e.time >= t_end) break;
    segments.push_back(Segment{start, e.time, current.network()});
    current = current.with_parameter(e.target, e.value);
    start = e.time;
  }
  segments.push_back(Segment{start, t_end, current.network()});
  return segments;
}

Trajectory integrate(const controller::ClosedLoop& closed_loop, const Schedule& schedule, double t_end,
                     const IntegratorOptions& options) {
  const auto start = schedule.state_at(closed_loop, 0.0);
  return integrate(closed_loop, schedule, t_end, start.initial_state(), options);
}

Trajectory integrate(const controller::ClosedLoop& closed_loop, const Schedule& schedule, double t_end,
                     const crn::State& x0, const IntegratorOptions& options) {
  if (static_cast<std::size_t>(x0.size()) == closed_loop.dimension() &&
      !(x0[static_cast<Eigen::Index>(closed_loop.controller_index())] > 0.0)) {
    throw Error("initial controller level must be > 0");
  }
  return integrate_segments(schedule_segments(closed_loop, schedule, t_end), x0, options);
}

}  // namespace crnctl::sim
