#include "crnctl/analysis/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnctl/analysis/equilibrium.hpp"
#include "crnctl/error.hpp"

namespace crnctl::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ReferenceData {
  double gain;
  double effective_reference;
};

ReferenceData reference_data(const crn::LinearForm& lf, double mu) {
  const double g = crn::static_gain(lf);
  const double scale = lf.C.cwiseAbs().dot(crn::solve_state_matrix(lf.A, lf.B).cwiseAbs());
  if (!(std::abs(g) > 1e-12 * scale) || scale == 0.0) throw Error("output controllability violated: C A^-1 B = 0");
  const double mu_eff = mu + crn::output_response(lf, lf.b);
  return {g, mu_eff};
}

Eigen::MatrixXd bordered(const crn::LinearForm& lf, const Eigen::VectorXd& top_right, const Eigen::RowVectorXd& bottom) {
  const auto d = lf.A.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = lf.A;
  m.topRightCorner(d, 1) = top_right;
  m.bottomLeftCorner(1, d) = bottom;
  return m;
}

// Newton polish of a real root of p.
double polish_root(const Polynomial& p, double x) {
  const Polynomial dp = p.derivative();
  for (int i = 0; i < 8; ++i) {
    const double fx = p(x);
    const double dfx = dp(x);
    if (dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!std::isfinite(next)) break;
    if (std::abs(next - x) <= 1e-16 * std::abs(x)) {
      x = next;
      break;
    }
    // Keep the polish only if it improves the residual.
    if (std::abs(p(next)) > std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace

crn::Spectrum zero_equilibrium_spectrum(const crn::LinearForm& lf, const controller::ControllerParams& params) {
  if (!(params.alpha > 0.0)) throw Error("alpha must be > 0 (alpha = 0 leaves a marginal zero eigenvalue)");
  if (!(params.mu > 0.0)) throw Error("mu must be > 0");
  // Block upper-triangular [[A, B k], [0, alpha mu]].
  const Eigen::MatrixXd m =
      bordered(lf, lf.B * params.k, Eigen::RowVectorXd::Zero(lf.A.rows()));
  Eigen::MatrixXd m0 = m;
  m0(lf.A.rows(), lf.A.rows()) = params.alpha * params.mu;
  return crn::eigenvalues(m0);
}

Eigen::MatrixXd positive_equilibrium_jacobian(const crn::LinearForm& lf, const controller::ControllerParams& params) {
  const auto eq = equilibria(lf, params);
  if (!eq.positive) throw Error("positive equilibrium does not exist (mu + C A^-1 b <= 0)");
  return bordered(lf, lf.B * params.k, -params.alpha * eq.positive->v * lf.C);
}

crn::Spectrum positive_equilibrium_spectrum(const crn::LinearForm& lf, const controller::ControllerParams& params) {
  return crn::eigenvalues(positive_equilibrium_jacobian(lf, params));
}

double closed_loop_abscissa(const crn::LinearForm& lf, double mu, double alpha) {
  const auto ref = reference_data(lf, mu);
  return crn::spectral_abscissa(bordered(lf, lf.B, -alpha * ref.effective_reference / ref.gain * lf.C));
}

TransferFunction normalized_transfer_function(const crn::LinearForm& lf) {
  const auto n = lf.A.rows();
  if (n == 0) throw Error("empty state matrix");
  const double g = crn::static_gain(lf);
  // Faddeev-LeVerrier: adj(sI - A) = sum_k M_k s^{n-k}, det(sI - A) = sum c_i s^i.
  std::vector<double> den(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> num(static_cast<std::size_t>(n), 0.0);
  den[static_cast<std::size_t>(n)] = 1.0;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = lf.A * m + den[static_cast<std::size_t>(n - k + 1)] * identity;
    num[static_cast<std::size_t>(n - k)] = lf.C.dot(m * lf.B) / g;
    den[static_cast<std::size_t>(n - k)] = -(lf.A * m).trace() / static_cast<double>(k);
  }
  return {Polynomial(std::move(num)), Polynomial(std::move(den))};
}

AlphaBarResult alpha_bar(const crn::LinearForm& lf, double mu) {
  if (!(mu > 0.0)) throw Error("mu must be > 0");
  const double abscissa = crn::spectral_abscissa(lf.A);
  if (!(abscissa < -crn::kHurwitzMargin)) throw Error("alpha_bar requires a Hurwitz state matrix");
  const auto ref = reference_data(lf, mu);
  if (!(ref.effective_reference > 0.0)) throw Error("reference is not reachable: mu + C A^-1 b <= 0");

  AlphaBarResult result;
  result.effective_reference = ref.effective_reference;
  const auto h = normalized_transfer_function(lf);
  result.numerator = split_on_imaginary_axis(h.numerator);
  result.denominator = split_on_imaginary_axis(h.denominator);
  const auto& nr = result.numerator.real;
  const auto& ni = result.numerator.imag;
  const auto& dr = result.denominator.real;
  const auto& di = result.denominator.imag;
  result.q = ni * di + nr * dr;

  // Q is even in w: find roots in z = w^2.
  const Polynomial qz = even_part_in_square(result.q).trimmed(1e-14);
  std::vector<double> omegas;
  if (qz.degree() >= 1) {
    for (const auto& z : qz.roots()) {
      if (std::abs(z.imag()) >= 1e-8 * (1.0 + std::abs(z))) continue;
      if (z.real() <= 0.0) continue;
      const double zr = polish_root(qz, z.real());
      if (zr <= 0.0) continue;
      const double w = std::sqrt(zr);
      if (w > 1e-9) omegas.push_back(w);
    }
  }
  std::sort(omegas.begin(), omegas.end());

  result.alpha_bar = kInf;
  const double mu_eff = ref.effective_reference;
  for (double w : omegas) {
    const double vnr = nr(w);
    const double vni = ni(w);
    const double vdr = dr(w);
    const double vdi = di(w);
    const double nscale = std::abs(h.numerator(std::complex<double>(0.0, w)));
    if (nscale == 0.0 || std::max(std::abs(vnr), std::abs(vni)) <= 1e-12 * nscale) continue;
    const double from_real = vdi * w / (mu_eff * vnr);
    const double from_imag = -vdr * w / (mu_eff * vni);
    const double alpha = std::abs(vnr) >= std::abs(vni) ? from_real : from_imag;
    if (!(alpha > 0.0) || !std::isfinite(alpha)) continue;
    if (alpha < result.alpha_bar) {
      result.alpha_bar = alpha;
      result.omega_star = w;
      const bool both = std::abs(vnr) > 1e-9 * nscale && std::abs(vni) > 1e-9 * nscale;
      result.branch_mismatch = both ? std::abs(from_real - from_imag) / std::abs(alpha) : 0.0;
    }
  }
  result.weakly_spr = !std::isfinite(result.alpha_bar);

  const auto spectrum = crn::eigenvalues(lf.A);
  double wscale = 0.0;
  for (const auto& z : spectrum) wscale = std::max(wscale, std::abs(z));
  wscale = std::max(wscale, 1e-12);
  double min_re = kInf;
  constexpr int kSweep = 400;
  for (int i = 0; i < kSweep; ++i) {
    const double w = wscale * std::pow(10.0, -4.0 + 8.0 * i / (kSweep - 1));
    min_re = std::min(min_re, h(std::complex<double>(0.0, w)).real());
  }
  result.sampled_min_real_part = min_re;
  return result;
}

BestAlpha best_alpha(const crn::LinearForm& lf, double mu, double cap) {
  const auto bar = alpha_bar(lf, mu);
  double lo = 0.0;
  double hi = 0.0;
  if (std::isfinite(bar.alpha_bar)) {
    lo = bar.alpha_bar * 1e-4;
    hi = bar.alpha_bar * 0.999;
  } else {
    if (!(cap > 0.0)) throw Error("alpha cap must be > 0");
    lo = cap * 1e-4;
    hi = cap;
  }
  auto chi = [&](double a) { return closed_loop_abscissa(lf, mu, a); };

  constexpr int kGrid = 200;
  std::vector<double> grid(kGrid);
  std::vector<double> values(kGrid);
  int best = 0;
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kGrid - 1));
    values[i] = chi(grid[i]);
    if (values[i] < values[best]) best = i;
  }
  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, kGrid - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = chi(x1);
  double f2 = chi(x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-8 * b; ++iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = chi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = chi(x2);
    }
  }
  BestAlpha out{grid[best], values[best]};
  const double candidate = f1 <= f2 ? x1 : x2;
  const double candidate_value = std::min(f1, f2);
  if (candidate_value <= out.abscissa) out = {candidate, candidate_value};
  return out;
}

}  // namespace crnctl::analysis
