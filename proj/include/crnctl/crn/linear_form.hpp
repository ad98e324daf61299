#pragma once

#include <string>

#include <Eigen/Dense>

#include "crnctl/crn/linalg.hpp"
#include "crnctl/crn/network.hpp"

namespace crnctl::crn {

/// Affine model x' = A x + b + B u + E d, y = C x of a network around a point.
struct LinearForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  Eigen::MatrixXd E;
  /// True when the network is unimolecular, so the form is exact everywhere.
  bool exact = false;

  std::size_t dimension() const { return static_cast<std::size_t>(A.rows()); }
};

/// Builds a LinearForm from explicit matrices (E defaults to an empty d x 0 block).
LinearForm make_linear_form(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd B, Eigen::RowVectorXd C,
                            Eigen::MatrixXd E = {});

/// Jacobian A at `point` and offset b = f(point) - A point. B = e_actuated, C = e_controlled^T.
LinearForm linearize(const Network& network, const State& point);

/// Hurwitz margin on the maximal real part of the spectrum.
inline constexpr double kHurwitzMargin = 1e-9;
/// Condition estimate above which A is treated as singular.
inline constexpr double kSingularCondition = 1e12;

/// Solves A z = rhs; throws Error when A is singular to working precision.
Eigen::VectorXd solve_state_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs);

/// C A^{-1} v computed by a linear solve.
double output_response(const LinearForm& lf, const Eigen::VectorXd& v);

/// Static gain g = -C A^{-1} B. Throws Error when A is singular.
double static_gain(const LinearForm& lf);

struct StructureReport {
  bool is_unimolecular = false;
  bool is_metzler = false;
  bool is_hurwitz = false;
  double spectral_abscissa = 0.0;
  bool is_output_controllable = false;
  double static_gain = 0.0;  // NaN when A is singular
  Spectrum eigenvalues_of_A;
  std::string diagnostic;
};

StructureReport structural_checks(const LinearForm& lf);

}  // namespace crnctl::crn
