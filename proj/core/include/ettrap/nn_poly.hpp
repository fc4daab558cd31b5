#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ettrap/hamiltonian.hpp"

namespace ettrap {

using cplx = std::complex<double>;

/// Characteristic polynomial of the gauge-shifted nearest-neighbour chain in the
/// variable x = -eps/(2J):
///   phi_N(x) = J^N [ U_N(x) - (i kappa / 2J) U_{N-1}(x) ]
/// with U_n the Chebyshev polynomials of the second kind.
struct CharPoly {
  int degree = 0;
  std::vector<cplx> coefficients;  ///< ascending powers of x
  double hopping = 1.0;
  cplx kappa{0.0, 0.0};

  cplx operator()(cplx x) const;
  double max_coefficient() const;
};

/// Coefficients of U_n(x), ascending powers, built by U_n = 2x U_{n-1} - U_{n-2}.
std::vector<double> chebyshev_u(int n);

/// N >= 2, J != 0; kappa may be complex (EP continuation off the real axis).
CharPoly nn_char_poly(int n_emitters, double hopping, cplx kappa);

/// Roots in x via the companion matrix of the monic polynomial.
std::vector<cplx> polynomial_roots(const CharPoly& poly);

/// Gauge-shifted (or plain) nearest-neighbour Hamiltonian with complex trap rate.
Eigen::MatrixXcd nn_hamiltonian_complex(int n_emitters, double hopping, cplx kappa, bool gauge_shifted = true,
                                        double gamma = 1.0);

/// prod_{n<m} (x_n - x_m)^2 over the eigenvalues of the chain, expressed in x.
cplx nn_discriminant(int n_emitters, double hopping, cplx kappa);

struct EPCandidate {
  cplx kappa;
  cplx degenerate_eigenvalue;  ///< mean of the coalescing pair (energy units)
  double vector_coalescence = 0.0;
  bool on_positive_real_axis = false;
  bool converged = false;
  bool confirmed = false;
  /// |x_a - x_b|^2 / (1 + max|x|^2) for the closest pair: the discriminant with its
  /// non-vanishing factors divided out.
  double discriminant_residual = 0.0;
};

struct EpLocusOptions {
  double scan_radius = 5.0;  ///< half-width of the square complex-kappa window, units of |J|
  int grid_points = 161;     ///< per axis
  double newton_tol = 1e-13;
  int newton_max_iter = 60;
  double dedup_tol = 1e-6;   ///< units of |J|
  bool gauge_shifted = true;
  double gamma = 1.0;
  int threads = 1;
};

/// Exceptional points of the nearest-neighbour chain in the complex kappa plane:
/// local minima of |D(kappa)| on a grid, complex Newton refinement, then eigenvector
/// coalescence check. Unconverged or unconfirmed iterates are kept and flagged.
/// Sorted by real part, then imaginary part.
std::vector<EPCandidate> nn_ep_locus(int n_emitters, double hopping, const EpLocusOptions& opts = {});

}  // namespace ettrap
