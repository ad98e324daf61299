#pragma once

#include <optional>

#include <Eigen/Dense>

#include "crnctl/analysis/polynomial.hpp"
#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/crn/linalg.hpp"
#include "crnctl/crn/linear_form.hpp"

namespace crnctl::analysis {

/// Spectrum of the closed loop linearized at the zero equilibrium:
/// lambda(A) together with alpha * mu. Requires alpha > 0.
crn::Spectrum zero_equilibrium_spectrum(const crn::LinearForm& lf, const controller::ControllerParams& params);

/// M_p = [[A, B k], [-alpha v* C, 0]] at the positive equilibrium.
Eigen::MatrixXd positive_equilibrium_jacobian(const crn::LinearForm& lf, const controller::ControllerParams& params);
crn::Spectrum positive_equilibrium_spectrum(const crn::LinearForm& lf, const controller::ControllerParams& params);

/// Spectral abscissa of the k-free positive-equilibrium matrix for a given alpha.
double closed_loop_abscissa(const crn::LinearForm& lf, double mu, double alpha);

/// H_n(s) = C (sI - A)^{-1} B / (-C A^{-1} B) as numerator / denominator,
/// built with the Faddeev-LeVerrier recursion. The denominator is det(sI - A).
struct TransferFunction {
  Polynomial numerator;
  Polynomial denominator;

  std::complex<double> operator()(std::complex<double> s) const { return numerator(s) / denominator(s); }
};
TransferFunction normalized_transfer_function(const crn::LinearForm& lf);

struct AlphaBarResult {
  /// Supremum of alpha keeping the positive equilibrium stable; +inf when unbounded.
  double alpha_bar = 0.0;
  std::optional<double> omega_star;
  bool weakly_spr = false;
  double effective_reference = 0.0;
  ImaginaryAxisSplit numerator;    // N_R, N_I
  ImaginaryAxisSplit denominator;  // D_R, D_I
  /// Q(w) = N_I D_I + N_R D_R.
  Polynomial q;
  /// Relative disagreement of the real- and imaginary-part formulas at omega*.
  double branch_mismatch = 0.0;
  /// Diagnostic: min of Re H_n(j w) over a log-spaced frequency sweep.
  double sampled_min_real_part = 0.0;
};

/// Stability threshold alpha_bar(mu) from the stability-crossing polynomial Q.
/// Requires A Hurwitz and C A^{-1} B != 0.
AlphaBarResult alpha_bar(const crn::LinearForm& lf, double mu);

struct BestAlpha {
  double alpha = 0.0;
  double abscissa = 0.0;
};

inline constexpr double kDefaultAlphaCap = 1e3;

/// alpha in (0, alpha_bar) minimizing the spectral abscissa of the
/// positive-equilibrium Jacobian: 200-point geometric grid then golden-section
/// refinement. When alpha_bar is infinite the search runs on (cap 1e-4, cap].
BestAlpha best_alpha(const crn::LinearForm& lf, double mu, double cap = kDefaultAlphaCap);

}  // namespace crnctl::analysis
