#pragma once

#include <Eigen/Dense>

#include "ettrap/dynamics.hpp"
#include "ettrap/geometry.hpp"
#include "ettrap/hamiltonian.hpp"
#include "ettrap/initial_state.hpp"

namespace ettrap {

enum class ChainKind {
  Dipole,           ///< couplings from the dipole kernels of a ChainGeometry
  NearestNeighbor,  ///< tridiagonal hopping J with independent decay
};

/// One physical run: chain, trap, environment, initial state and time grid.
/// All rates are in units of gamma.
struct Scenario {
  ChainKind chain = ChainKind::Dipole;
  int n_emitters = 10;
  double spacing_lambda = 0.05;
  Eigen::Vector3d orientation = polarization_vector(Polarization::Transverse);
  DecayModel model = DecayModel::Cooperative;
  double hopping = 1.0;  ///< nearest-neighbour chains only
  double kappa = 0.0;
  int trap_site = 0;     ///< 1-based; 0 selects the last emitter
  double detuning = 0.0;
  double dephasing = 0.0;
  InitialState initial = InitialState::site(1);
  TimeGrid grid;
  Propagator propagator = Propagator::Auto;

  void validate() const;
  ChainGeometry geometry() const;
  /// H_ch with kappa = Delta = 0 (trap site already set).
  EffectiveHamiltonian chain_hamiltonian() const;
  EffectiveHamiltonian hamiltonian() const;
  /// |J_12| of the chain, the natural rate unit.
  double nearest_neighbor_coupling() const;
};

/// Pure propagation when dephasing == 0, density propagation otherwise.
Trajectory simulate(const Scenario& s);

/// p_T(t_max) without storing intermediate samples.
double final_efficiency(const EffectiveHamiltonian& h, double dephasing, const Eigen::VectorXcd& psi0,
                        const TimeGrid& grid, Propagator method = Propagator::Auto);
double final_efficiency(const Scenario& s);

}  // namespace ettrap
