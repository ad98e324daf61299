#include "crnctl/analysis/disturbance.hpp"

#include <cmath>
#include <limits>

#include "crnctl/analysis/stability.hpp"
#include "crnctl/error.hpp"

namespace crnctl::analysis {

DisturbanceModel disturbance_analysis(const crn::LinearForm& lf, const controller::ControllerParams& params,
                                      const Eigen::MatrixXd& E, const Eigen::VectorXd& d) {
  if (E.rows() != lf.A.rows() || E.cols() != d.size()) throw Error("disturbance matrix and vector sizes disagree");
  if ((d.array() < 0.0).any()) throw Error("disturbance amplitudes must be nonnegative");
  if ((E.array() < 0.0).any()) throw Error("disturbance matrix must be nonnegative");

  crn::LinearForm disturbed = lf;
  disturbed.E = E;

  DisturbanceModel model;
  model.E = E;
  model.d = d;
  model.output_shift = crn::output_response(lf, E * d);

  const auto base = alpha_bar(lf, params.mu);
  model.alpha_bar = base.alpha_bar;

  const auto eq = equilibria(disturbed, params, d);
  model.perturbed_zero = eq.zero;
  model.perturbed_positive = eq.positive;
  model.admissible = eq.effective_reference > 0.0;
  if (!model.admissible) {
    model.alpha_bar_d = std::numeric_limits<double>::quiet_NaN();
  } else if (std::isinf(base.alpha_bar)) {
    model.alpha_bar_d = base.alpha_bar;
  } else {
    model.alpha_bar_d = base.effective_reference / eq.effective_reference * base.alpha_bar;
  }
  return model;
}

}  // namespace crnctl::analysis
