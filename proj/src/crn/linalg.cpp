#include "crnctl/crn/linalg.hpp"

#include <algorithm>
#include <limits>

#include "crnctl/error.hpp"

namespace crnctl::crn {

Spectrum eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error("eigenvalues of a non-square matrix");
  Spectrum out;
  if (m.rows() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue computation did not converge");
  const auto& ev = solver.eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  return out;
}

double spectral_abscissa(const Spectrum& spectrum) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& z : spectrum) best = std::max(best, z.real());
  return best;
}

double spectral_abscissa(const Eigen::MatrixXd& m) { return spectral_abscissa(eigenvalues(m)); }

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& z : a) {
    std::size_t pick = b.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - b[j]);
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace crnctl::crn
