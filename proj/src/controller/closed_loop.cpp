#include "crnctl/controller/closed_loop.hpp"

#include <cmath>

#include "crnctl/error.hpp"

namespace crnctl::controller {

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void ControllerParams::validate() const {
  if (!positive_finite(mu)) throw Error("controller mu must be > 0");
  if (!positive_finite(alpha)) throw Error("controller alpha must be > 0");
  if (!positive_finite(k)) throw Error("controller k must be > 0");
  // v = 0 is invariant and pins the loop at the unstable zero equilibrium.
  if (!positive_finite(v0)) throw Error("controller v0 must be > 0");
}

double hill_rho(const HillParams& hill, const ControllerParams& params, double gamma) {
  return params.k * hill.theta / (params.mu * gamma);
}

ClosedLoop::ClosedLoop(crn::Network plant, ControllerParams params, std::optional<HillParams> hill,
                       std::vector<Disturbance> disturbances, std::string controller_name)
    : plant_(std::move(plant)),
      params_(params),
      hill_(hill),
      disturbances_(std::move(disturbances)),
      controller_name_(std::move(controller_name)) {
  params_.validate();
  if (hill_ && !positive_finite(hill_->theta)) throw Error("Hill theta must be > 0");
  if (plant_.index_of(controller_name_)) {
    throw Error("plant already declares a species named '" + controller_name_ + "'");
  }
  const auto d = static_cast<Eigen::Index>(plant_.size());
  for (const auto& dist : disturbances_) {
    if (dist.direction.size() != d) throw Error("disturbance '" + dist.name + "' has wrong dimension");
    if ((dist.direction.array() < 0.0).any()) throw Error("disturbance '" + dist.name + "' has a negative direction");
    if (!(dist.amplitude >= 0.0)) throw Error("disturbance '" + dist.name + "' amplitude must be >= 0");
  }
  realize();
}

void ClosedLoop::realize() {
  const std::size_t d = plant_.size();
  const std::size_t v = d;
  auto species = plant_.species();
  species.push_back({controller_name_, params_.v0});

  auto reactions = plant_.reactions();
  crn::Reaction reference;
  reference.label = std::string(kReferenceLabel);
  reference.reactants = {{v, 1}};
  reference.products = {{v, 2}};
  reference.rate_constant = params_.alpha * params_.mu;
  if (hill_) reference.hill = crn::HillRepression{hill_->theta, v};

  crn::Reaction measurement;
  measurement.label = std::string(kMeasurementLabel);
  measurement.reactants = {{v, 1}, {plant_.controlled(), 1}};
  measurement.products = {{plant_.controlled(), 1}};
  measurement.rate_constant = params_.alpha;

  crn::Reaction actuation;
  actuation.label = std::string(kActuationLabel);
  actuation.reactants = {{v, 1}};
  actuation.products = {{v, 1}, {plant_.actuated(), 1}};
  actuation.rate_constant = params_.k;

  reactions.push_back(std::move(reference));
  reactions.push_back(std::move(measurement));
  reactions.push_back(std::move(actuation));

  Eigen::VectorXd inflow = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  inflow.head(static_cast<Eigen::Index>(d)) = plant_.inflow();
  for (const auto& dist : disturbances_) inflow.head(static_cast<Eigen::Index>(d)) += dist.amplitude * dist.direction;

  network_ = crn::Network(std::move(species), std::move(reactions), plant_.controlled(), plant_.actuated(),
                          std::move(inflow));
}

Eigen::MatrixXd ClosedLoop::disturbance_matrix() const {
  Eigen::MatrixXd E(static_cast<Eigen::Index>(plant_.size()), static_cast<Eigen::Index>(disturbances_.size()));
  for (std::size_t j = 0; j < disturbances_.size(); ++j) E.col(static_cast<Eigen::Index>(j)) = disturbances_[j].direction;
  return E;
}

Eigen::VectorXd ClosedLoop::disturbance_amplitudes() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(disturbances_.size()));
  for (std::size_t j = 0; j < disturbances_.size(); ++j) d[static_cast<Eigen::Index>(j)] = disturbances_[j].amplitude;
  return d;
}

double ClosedLoop::parameter(std::string_view path) const {
  if (path == "mu") return params_.mu;
  if (path == "alpha") return params_.alpha;
  if (path == "k") return params_.k;
  if (path == "v0") return params_.v0;
  if (path == "theta") {
    if (!hill_) throw Error("parameter 'theta' requires a Hill controller");
    return hill_->theta;
  }
  if (path.starts_with("rate.")) {
    const auto label = path.substr(5);
    if (auto r = plant_.reaction_index(label)) return plant_.reactions()[*r].rate_constant;
    throw Error("unknown plant reaction label '" + std::string(label) + "'");
  }
  if (path.starts_with("disturbance.")) {
    const auto name = path.substr(12);
    for (const auto& dist : disturbances_) {
      if (dist.name == name) return dist.amplitude;
    }
    throw Error("unknown disturbance '" + std::string(name) + "'");
  }
  throw Error("unknown parameter path '" + std::string(path) + "'");
}

ClosedLoop ClosedLoop::with_parameter(std::string_view path, double value) const {
  auto params = params_;
  auto hill = hill_;
  auto plant = plant_;
  auto disturbances = disturbances_;
  if (path == "mu") {
    params.mu = value;
  } else if (path == "alpha") {
    params.alpha = value;
  } else if (path == "k") {
    params.k = value;
  } else if (path == "v0") {
    params.v0 = value;
  } else if (path == "theta") {
    if (!hill) throw Error("parameter 'theta' requires a Hill controller");
    hill->theta = value;
  } else if (path.starts_with("rate.")) {
    const auto label = path.substr(5);
    const auto r = plant.reaction_index(label);
    if (!r) throw Error("unknown plant reaction label '" + std::string(label) + "'");
    if (!positive_finite(value)) throw Error("rate '" + std::string(label) + "' must be > 0");
    plant = plant.with_rate(*r, value);
  } else if (path.starts_with("disturbance.")) {
    const auto name = path.substr(12);
    bool found = false;
    for (auto& dist : disturbances) {
      if (dist.name == name) {
        dist.amplitude = value;
        found = true;
      }
    }
    if (!found) throw Error("unknown disturbance '" + std::string(name) + "'");
  } else {
    throw Error("unknown parameter path '" + std::string(path) + "'");
  }
  return ClosedLoop(std::move(plant), params, hill, std::move(disturbances), controller_name_);
}

ClosedLoop ClosedLoop::with_plant_state(const crn::State& x) const {
  return ClosedLoop(plant_.with_initial_state(x), params_, hill_, disturbances_, controller_name_);
}

ClosedLoop attach_integral_controller(crn::Network plant, const ControllerParams& params) {
  return ClosedLoop(std::move(plant), params);
}

ClosedLoop attach_hill_controller(crn::Network plant, const ControllerParams& params, const HillParams& hill) {
  if (!positive_finite(hill.theta)) throw Error("Hill theta must be > 0");
  return ClosedLoop(std::move(plant), params, hill);
}

}  // namespace crnctl::controller
