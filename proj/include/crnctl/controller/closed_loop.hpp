#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "crnctl/crn/network.hpp"

namespace crnctl::controller {

/// Reference mu, stability coefficient alpha, gain k and initial controller level v0.
struct ControllerParams {
  double mu = 1.0;
  double alpha = 1.0;
  double k = 1.0;
  double v0 = 1.0;

  void validate() const;
};

struct HillParams {
  double theta = 0.0;
};

/// rho = k theta / (mu gamma) for the controlled birth-death process.
double hill_rho(const HillParams& hill, const ControllerParams& params, double gamma);

/// Constant input disturbance: amplitude times a nonnegative direction column of E.
struct Disturbance {
  std::string name;
  Eigen::VectorXd direction;
  double amplitude = 0.0;
};

inline constexpr std::string_view kReferenceLabel = "reference";
inline constexpr std::string_view kMeasurementLabel = "measurement";
inline constexpr std::string_view kActuationLabel = "actuation";

/// Plant network interconnected with the integral controller
///   V -> 2V (alpha mu), V + X_l -> X_l (alpha), V -> V + X_a (k).
/// The realized network lists the plant species followed by V, and the
/// plant reactions followed by the three controller reactions.
class ClosedLoop {
 public:
  ClosedLoop(crn::Network plant, ControllerParams params, std::optional<HillParams> hill = std::nullopt,
             std::vector<Disturbance> disturbances = {}, std::string controller_name = "v");

  const crn::Network& plant() const { return plant_; }
  const ControllerParams& params() const { return params_; }
  const std::optional<HillParams>& hill() const { return hill_; }
  const std::vector<Disturbance>& disturbances() const { return disturbances_; }
  const std::string& controller_name() const { return controller_name_; }

  /// The combined mass-action network, with E d folded into its inflow.
  const crn::Network& network() const { return network_; }
  std::size_t controller_index() const { return plant_.size(); }
  std::size_t dimension() const { return plant_.size() + 1; }
  crn::State initial_state() const { return network_.initial_state(); }

  Eigen::MatrixXd disturbance_matrix() const;
  Eigen::VectorXd disturbance_amplitudes() const;

  /// Parameter addressing used by schedules: "mu", "alpha", "k", "theta",
  /// "v0", "rate.<plant reaction label>" and "disturbance.<name>".
  double parameter(std::string_view path) const;
  ClosedLoop with_parameter(std::string_view path, double value) const;
  ClosedLoop with_plant_state(const crn::State& x) const;

 private:
  void realize();

  crn::Network plant_;
  ControllerParams params_;
  std::optional<HillParams> hill_;
  std::vector<Disturbance> disturbances_;
  std::string controller_name_;
  crn::Network network_;
};

ClosedLoop attach_integral_controller(crn::Network plant, const ControllerParams& params);
ClosedLoop attach_hill_controller(crn::Network plant, const ControllerParams& params, const HillParams& hill);

}  // namespace crnctl::controller
