#pragma once

#include <optional>

#include <Eigen/Dense>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linear_form.hpp"

namespace crnctl::analysis {

struct EquilibriumPoint {
  Eigen::VectorXd x;
  double v = 0.0;

  /// (x, v) stacked in closed-loop species order.
  Eigen::VectorXd stacked() const;
};

/// Zero and positive equilibria of the affine plant x' = A x + w + B k v under
/// the integral controller, where w = b + E d collects constant inputs.
struct EquilibriumPair {
  EquilibriumPoint zero;
  std::optional<EquilibriumPoint> positive;
  /// mu + C A^{-1} w; the positive equilibrium exists iff this is > 0.
  double effective_reference = 0.0;
  double static_gain = 0.0;
};

/// Closed-form equilibria with w = lf.b (+ E d when `d` is given).
EquilibriumPair equilibria(const crn::LinearForm& lf, const controller::ControllerParams& params,
                           const Eigen::VectorXd& d = {});

}  // namespace crnctl::analysis
