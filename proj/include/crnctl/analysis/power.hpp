#pragma once

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linear_form.hpp"

namespace crnctl::analysis {

/// Energy per firing of the reference, measurement and actuation reactions.
struct MetabolicCosts {
  double kappa_r = 0.0;
  double kappa_m = 0.0;
  double kappa_a = 0.0;

  void validate() const;
};

struct PowerBreakdown {
  double adaptation_cost = 0.0;
  double constitutive_limit = 0.0;
  double total = 0.0;
};

/// Stationary controller power at the positive equilibrium,
/// P* = alpha mu^2 (kappa_r + kappa_m) / (k g) + mu kappa_a / g when b = 0.
/// Assumes the positive equilibrium is asymptotically stable.
PowerBreakdown stationary_power(const crn::LinearForm& lf, const controller::ControllerParams& params,
                                const MetabolicCosts& costs);

/// P* = u* (alpha mu (kappa_r + kappa_m) / k + kappa_a) for a stationary input u* = k v*.
PowerBreakdown stationary_power_from_input(double u_star, const controller::ControllerParams& params,
                                           const MetabolicCosts& costs);

}  // namespace crnctl::analysis
