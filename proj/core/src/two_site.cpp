#include "ettrap/two_site.hpp"

#include <cmath>
#include <stdexcept>

namespace ettrap {

namespace {
using cplx = std::complex<double>;
const cplx kI{0.0, 1.0};
}  // namespace

std::pair<cplx, cplx> two_site_amplitudes(double hopping, double gamma, double kappa, double t) {
  if (!std::isfinite(hopping) || !std::isfinite(gamma) || !std::isfinite(kappa) || !std::isfinite(t))
    throw std::invalid_argument("two-site parameters must be finite");
  const cplx lambda = 0.5 * std::sqrt(cplx(4.0 * hopping * hopping - 0.25 * kappa * kappa, 0.0));
  const double chi = gamma + 0.5 * kappa;
  const cplx lt = lambda * t;
  cplx damped_sinc;  // e^{-chi t/2} sin(lambda t)/lambda
  cplx damped_cos;   // e^{-chi t/2} cos(lambda t)
  if (std::abs(lt) < 1e-4) {
    const cplx l2 = lt * lt;
    const double env = std::exp(-0.5 * chi * t);
    damped_sinc = env * t * (1.0 - l2 / 6.0 + l2 * l2 / 120.0);
    damped_cos = env * (1.0 - l2 / 2.0 + l2 * l2 / 24.0);
  } else {
    const cplx ep = std::exp((kI * lambda - 0.5 * chi) * t);
    const cplx em = std::exp((-kI * lambda - 0.5 * chi) * t);
    damped_sinc = (ep - em) / (2.0 * kI * lambda);
    damped_cos = 0.5 * (ep + em);
  }
  const cplx c1 = 0.25 * kappa * damped_sinc + damped_cos;
  const cplx c2 = -kI * hopping * damped_sinc;
  return {c1, c2};
}

double two_site_efficiency_infty(double hopping, double gamma, double kappa) {
  if (kappa < 0.0 || !(gamma > 0.0)) throw std::invalid_argument("two-site efficiency needs kappa >= 0, gamma > 0");
  const double j2 = 4.0 * hopping * hopping;
  return j2 * kappa / ((2.0 * gamma + kappa) * (j2 + gamma * (gamma + kappa)));
}

TwoSiteOptimum two_site_optimal(double hopping, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("two-site optimum needs gamma > 0");
  TwoSiteOptimum out;
  out.kappa_opt = std::sqrt(8.0 * hopping * hopping + 2.0 * gamma * gamma);
  out.eta_opt = 4.0 * hopping * hopping / (4.0 * hopping * hopping + 3.0 * gamma * gamma + 2.0 * gamma * out.kappa_opt);
  return out;
}

}  // namespace ettrap
