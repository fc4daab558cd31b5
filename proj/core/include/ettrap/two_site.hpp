#pragma once

#include <complex>
#include <utility>

namespace ettrap {

/// Closed forms for the two-site chain with independent decay, hopping J, emitter
/// decay gamma and trap kappa on site 2, starting from |e_1>.

/// (c_1(t), c_2(t)). The critical point 4J = kappa (lambda = 0) uses the series of
/// sin(lambda t)/lambda; no exponentially growing intermediates are formed.
std::pair<std::complex<double>, std::complex<double>> two_site_amplitudes(double hopping, double gamma, double kappa,
                                                                          double t);

/// eta(inf) = 4 J^2 kappa / [(2 gamma + kappa)(4 J^2 + gamma (gamma + kappa))]
double two_site_efficiency_infty(double hopping, double gamma, double kappa);

struct TwoSiteOptimum {
  double kappa_opt = 0.0;  ///< sqrt(8 J^2 + 2 gamma^2)
  double eta_opt = 0.0;    ///< 4 J^2 / (4 J^2 + 3 gamma^2 + 2 gamma kappa_opt)
};

TwoSiteOptimum two_site_optimal(double hopping, double gamma);

}  // namespace ettrap
