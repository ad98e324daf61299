#pragma once

#include <optional>

#include <Eigen/Dense>

#include "crnctl/analysis/equilibrium.hpp"
#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linear_form.hpp"

namespace crnctl::analysis {

struct DisturbanceModel {
  Eigen::MatrixXd E;
  Eigen::VectorXd d;
  /// C A^{-1} E d.
  double output_shift = 0.0;
  /// d belongs to D_mu, i.e. mu + C A^{-1} (b + E d) > 0.
  bool admissible = false;
  double alpha_bar = 0.0;
  /// alpha_bar scaled by mu_eff / (mu_eff + C A^{-1} E d); +inf when alpha_bar is.
  double alpha_bar_d = 0.0;
  EquilibriumPoint perturbed_zero;
  std::optional<EquilibriumPoint> perturbed_positive;
};

/// Constant input disturbance analysis of x' = A x + b + B k v + E d.
DisturbanceModel disturbance_analysis(const crn::LinearForm& lf, const controller::ControllerParams& params,
                                      const Eigen::MatrixXd& E, const Eigen::VectorXd& d);

}  // namespace crnctl::analysis
