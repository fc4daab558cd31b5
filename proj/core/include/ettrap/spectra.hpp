#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ettrap/geometry.hpp"
#include "ettrap/hamiltonian.hpp"

namespace ettrap {

enum class ModeTag : std::uint8_t {
  Plain = 0,
  Bright = 1 << 0,
  Dark = 1 << 1,
  Fast = 1 << 2,
  Slow = 1 << 3,
};

/// Right eigenmodes of a non-Hermitian Hamiltonian, eigenvalue eps_n - (i/2) Gamma_n.
/// Modes are sorted by energy (ascending, ties broken by decay rate); each vector
/// has unit Euclidean norm with its largest-magnitude component real and positive.
struct ModeSet {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd vectors;
  std::vector<std::uint8_t> tags;
  /// 2-norm condition number of the eigenvector matrix.
  double condition_number = 1.0;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
  double energy(int n) const { return eigenvalues[n].real(); }
  double decay_rate(int n) const { return -2.0 * eigenvalues[n].imag(); }
  bool has(int n, ModeTag tag) const;
  void add_tag(int n, ModeTag tag);
  /// First mode carrying `tag`, or -1.
  int find(ModeTag tag) const;
};

/// Full spectrum with bright (max Gamma) and dark (min Gamma) labels. When the
/// Hamiltonian has a trap (kappa > 0) the mode with the largest acceptor weight is
/// labelled fast; slow labels need a kappa path (see label_fast_slow in pt_scan.hpp).
/// Throws NumericalError when the eigensolver does not converge.
ModeSet eigendecompose(const EffectiveHamiltonian& h);

/// Same decomposition for a raw complex matrix (no trap-based labels).
ModeSet eigendecompose(const Eigen::MatrixXcd& matrix);

/// Standing-wave approximation of the n-th chain mode (n is 1-based):
/// cos(k_n x_j) for odd n, sin(k_n x_j) for even n, k_n a = pi n / (N + 1),
/// x_j = j a - (N + 1) a / 2. Unit norm.
Eigen::VectorXd mode_ansatz(int n_emitters, int n);

/// Group-velocity estimate of the optimal trap rate, 2 |J_12| (units of gamma).
double group_velocity_kappa_opt(const ChainGeometry& geom, DecayModel model = DecayModel::Cooperative);

struct LevelSplitting {
  double sum = 0.0;   ///< sum_{n<m} |eps_n - eps_m|
  double mean = 0.0;  ///< sum divided by the number of pairs
};

LevelSplitting aggregate_level_splitting(const ModeSet& modes);

/// |<a|b>|^2 for unit vectors.
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace ettrap
