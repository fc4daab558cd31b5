#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ettrap/hamiltonian.hpp"
#include "ettrap/spectra.hpp"

namespace ettrap {

using HamiltonianBuilder = std::function<EffectiveHamiltonian(double kappa)>;

/// Eigenmodes followed along an increasing kappa path. Branch b at grid point k is
/// eigenvalues[k][b] / vectors[k].col(b); successive points are linked by maximal
/// eigenvector overlap, never by eigenvalue ordering.
struct ModeTrack {
  std::vector<double> kappas;
  std::vector<Eigen::VectorXcd> eigenvalues;
  std::vector<Eigen::MatrixXcd> vectors;
  double min_overlap = 1.0;  ///< smallest |<v_k|v_{k+1}>| used for a link
  int fast_branch = -1;      ///< largest decay rate at the end of the path

  int branches() const { return eigenvalues.empty() ? 0 : static_cast<int>(eigenvalues.front().size()); }
  double decay_rate(int branch, std::size_t k) const { return -2.0 * eigenvalues[k][branch].imag(); }
};

/// Throws NumericalError if any link overlap falls below `min_overlap`.
ModeTrack track_modes(const HamiltonianBuilder& builder, const std::vector<double>& kappas,
                      double min_overlap = 0.8);

struct PtTransition {
  bool found = false;
  double kappa_pt = 0.0;
  int slow_branch = -1;
  int fast_branch = -1;
  ModeTrack track;
};

/// Passive PT transition: the kappa at which the tracked slow mode's dGamma/dkappa
/// turns from positive to negative. Derivatives are central differences on the
/// grid; the bracketing interval is refined by Brent maximisation of Gamma_s.
/// No sign change returns found == false (not an error).
PtTransition pt_transition_scan(const HamiltonianBuilder& builder, const std::vector<double>& kappa_grid,
                                double refine_tol = 1e-10);

/// Labels fast / slow modes in `modes` (computed at `kappa`) by overlap with the
/// tracked branches at the nearest grid point of `scan`.
void label_fast_slow(ModeSet& modes, const PtTransition& scan, double kappa);

}  // namespace ettrap
