#include "crnctl/analysis/power.hpp"

#include <cmath>

#include "crnctl/analysis/equilibrium.hpp"
#include "crnctl/error.hpp"

namespace crnctl::analysis {

void MetabolicCosts::validate() const {
  if (!(kappa_r >= 0.0) || !(kappa_m >= 0.0) || !(kappa_a >= 0.0)) {
    throw Error("metabolic costs must be nonnegative");
  }
}

PowerBreakdown stationary_power_from_input(double u_star, const controller::ControllerParams& params,
                                           const MetabolicCosts& costs) {
  costs.validate();
  PowerBreakdown p;
  p.adaptation_cost = u_star * params.alpha * params.mu * (costs.kappa_r + costs.kappa_m) / params.k;
  p.constitutive_limit = u_star * costs.kappa_a;
  p.total = p.adaptation_cost + p.constitutive_limit;
  return p;
}

PowerBreakdown stationary_power(const crn::LinearForm& lf, const controller::ControllerParams& params,
                                const MetabolicCosts& costs) {
  const auto eq = equilibria(lf, params);
  if (!eq.positive) throw Error("stationary power requires an existing positive equilibrium");
  return stationary_power_from_input(params.k * eq.positive->v, params, costs);
}

}  // namespace crnctl::analysis
