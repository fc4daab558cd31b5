#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "ettrap/geometry.hpp"

namespace ettrap {

/// Non-Hermitian single-excitation Hamiltonian
///   H = J - (i/2) Gamma + Delta P_trap - (i/2) kappa P_trap
/// in the site basis, in units of gamma. The constant omega0 is dropped.
///
/// Instances are immutable values; with_trap / with_detuning return new ones.
struct EffectiveHamiltonian {
  Eigen::MatrixXcd matrix;
  int trap_site = 0;  ///< zero-based
  double kappa = 0.0;
  double detuning = 0.0;
  DecayModel decay_model = DecayModel::Cooperative;
  /// True when the uniform -(i/2) gamma diagonal has been removed.
  bool gauge_shifted = false;
  /// Geometry the couplings came from; empty for hand-built nearest-neighbour chains.
  std::shared_ptr<const ChainGeometry> source_geometry;

  int size() const noexcept { return static_cast<int>(matrix.rows()); }

  /// Radiative loss matrix Gamma recovered from the anti-Hermitian part,
  /// i (H - H^dagger) - kappa P_trap. Drives the vacuum ledger.
  Eigen::MatrixXd vacuum_rates() const;
  /// Full loss operator i (H - H^dagger) = Gamma + kappa P_trap.
  Eigen::MatrixXd loss_operator() const;
};

/// H_ch = J - (i/2) Gamma with kappa = Delta = 0, trap site defaulting to the last emitter.
EffectiveHamiltonian build_h_chain(const ChainGeometry& geom, DecayModel model);

/// Sets the trap: any previous trap is removed and -(i/2) kappa added on `trap_site`.
/// Throws std::invalid_argument for kappa < 0 or an invalid site.
EffectiveHamiltonian with_trap(const EffectiveHamiltonian& h, double kappa, std::optional<int> trap_site = std::nullopt);

/// Sets the (real) acceptor detuning Delta on the trap site, replacing any previous one.
EffectiveHamiltonian with_detuning(const EffectiveHamiltonian& h, double delta);

/// Adds real detunings on every site (exploratory, used by the all-sites disorder variant).
EffectiveHamiltonian with_site_detunings(const EffectiveHamiltonian& h, const Eigen::VectorXd& deltas);

struct NearestNeighborSpec {
  int n_emitters = 2;
  double hopping = 1.0;  ///< J, units of gamma
  double kappa = 0.0;
  double gamma = 1.0;
};

/// Tridiagonal chain: hopping J, diagonal -(i/2) gamma, trap -(i/2) kappa on the last site.
/// With `gauge_shift` the uniform -(i/2) gamma is dropped (interaction picture).
EffectiveHamiltonian build_nearest_neighbor(const NearestNeighborSpec& spec, bool gauge_shift = false);

}  // namespace ettrap
