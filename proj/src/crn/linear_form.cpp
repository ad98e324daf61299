#include "crnctl/crn/linear_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "crnctl/crn/kinetics.hpp"
#include "crnctl/error.hpp"

namespace crnctl::crn {

LinearForm make_linear_form(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd B, Eigen::RowVectorXd C,
                            Eigen::MatrixXd E) {
  const auto d = A.rows();
  if (A.cols() != d || b.size() != d || B.size() != d || C.size() != d) {
    throw Error("linear form blocks have inconsistent dimensions");
  }
  if (E.size() == 0) E = Eigen::MatrixXd::Zero(d, 0);
  if (E.rows() != d) throw Error("disturbance matrix E has wrong row count");
  LinearForm lf;
  lf.A = std::move(A);
  lf.b = std::move(b);
  lf.B = std::move(B);
  lf.C = std::move(C);
  lf.E = std::move(E);
  return lf;
}

LinearForm linearize(const Network& network, const State& point) {
  const auto d = static_cast<Eigen::Index>(network.size());
  if (point.size() != d) throw Error("linearization point has wrong dimension");
  if ((point.array() < 0.0).any()) throw Error("linearization point has a negative entry");
  Kinetics kin(network);
  Eigen::MatrixXd A;
  kin.jacobian(point, A);
  Eigen::VectorXd f(d);
  kin.rhs(point, f);
  LinearForm lf;
  lf.A = A;
  lf.b = f - A * point;
  lf.B = Eigen::VectorXd::Unit(d, static_cast<Eigen::Index>(network.actuated()));
  lf.C = Eigen::RowVectorXd::Unit(d, static_cast<Eigen::Index>(network.controlled()));
  lf.E = Eigen::MatrixXd::Zero(d, 0);
  lf.exact = network.is_unimolecular();
  if (lf.exact) {
    // Unimolecular offsets are exactly the zeroth-order production plus inflow.
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
    kin.rhs(zero, lf.b);
  }
  return lf;
}

Eigen::VectorXd solve_state_matrix(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
  if (A.rows() == 0) return Eigen::VectorXd();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kSingularCondition)) {
    std::ostringstream msg;
    msg << "state matrix is singular (condition estimate " << (rcond > 0 ? 1.0 / rcond : INFINITY) << ")";
    throw Error(msg.str());
  }
  return lu.solve(rhs);
}

double output_response(const LinearForm& lf, const Eigen::VectorXd& v) {
  return lf.C.dot(solve_state_matrix(lf.A, v));
}

double static_gain(const LinearForm& lf) { return -output_response(lf, lf.B); }

StructureReport structural_checks(const LinearForm& lf) {
  StructureReport report;
  report.is_unimolecular = lf.exact;
  const auto d = lf.A.rows();
  report.is_metzler = true;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && lf.A(i, j) < 0.0) report.is_metzler = false;
    }
  }
  report.eigenvalues_of_A = eigenvalues(lf.A);
  report.spectral_abscissa = spectral_abscissa(report.eigenvalues_of_A);
  report.is_hurwitz = report.spectral_abscissa < -kHurwitzMargin;
  std::ostringstream diag;
  try {
    const Eigen::VectorXd z = solve_state_matrix(lf.A, lf.B);
    const double response = lf.C.dot(z);
    report.static_gain = -response;
    const double scale = lf.C.cwiseAbs().dot(z.cwiseAbs());
    report.is_output_controllable = std::abs(response) > 1e-12 * std::max(scale, std::numeric_limits<double>::min());
    if (!report.is_output_controllable) diag << "C A^-1 B vanishes: output does not respond to the actuated species";
  } catch (const Error& e) {
    report.static_gain = std::numeric_limits<double>::quiet_NaN();
    report.is_output_controllable = false;
    diag << e.what();
  }
  if (!report.is_metzler) {
    if (diag.tellp() > 0) diag << "; ";
    diag << "A has negative off-diagonal entries";
  }
  if (!report.is_hurwitz) {
    if (diag.tellp() > 0) diag << "; ";
    diag << "A is not Hurwitz (spectral abscissa " << report.spectral_abscissa << ")";
  }
  report.diagnostic = diag.str();
  return report;
}

}  // namespace crnctl::crn
