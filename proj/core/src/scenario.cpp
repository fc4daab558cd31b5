#include "ettrap/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "ettrap/errors.hpp"

namespace ettrap {

void Scenario::validate() const {
  if (n_emitters < 1) throw ConfigError("n_emitters must be >= 1");
  if (chain == ChainKind::NearestNeighbor && n_emitters < 2) throw ConfigError("nearest-neighbour chain needs n_emitters >= 2");
  if (chain == ChainKind::Dipole && !(spacing_lambda > 0.0)) throw ConfigError("spacing_lambda must be > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be >= 0");
  if (!(dephasing >= 0.0) || !std::isfinite(dephasing)) throw ConfigError("dephasing_rate must be >= 0");
  if (!std::isfinite(detuning)) throw ConfigError("detuning must be finite");
  if (trap_site < 0 || trap_site > n_emitters) throw ConfigError("trap_site must lie in 1..n_emitters");
  if (!(grid.t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (grid.n_steps < 1) throw ConfigError("n_samples must be >= 2");
  if (!(grid.rtol > 0.0) || !(grid.atol > 0.0)) throw ConfigError("rtol and atol must be > 0");
}

ChainGeometry Scenario::geometry() const {
  return ChainGeometry::uniform(n_emitters, spacing_lambda, orientation, 1.0);
}

EffectiveHamiltonian Scenario::chain_hamiltonian() const {
  EffectiveHamiltonian h;
  if (chain == ChainKind::NearestNeighbor) {
    h = build_nearest_neighbor({n_emitters, hopping, 0.0, 1.0});
  } else {
    h = build_h_chain(geometry(), model);
  }
  return with_trap(h, 0.0, trap_site == 0 ? n_emitters - 1 : trap_site - 1);
}

EffectiveHamiltonian Scenario::hamiltonian() const {
  return with_detuning(with_trap(chain_hamiltonian(), kappa), detuning);
}

double Scenario::nearest_neighbor_coupling() const {
  if (chain == ChainKind::NearestNeighbor) return std::abs(hopping);
  if (n_emitters < 2) return 0.0;
  return std::abs(j_rate(geometry(), 0, 1, model));
}

Trajectory simulate(const Scenario& s) {
  s.validate();
  const EffectiveHamiltonian h = s.hamiltonian();
  if (s.dephasing == 0.0) return propagate_pure(h, s.initial, s.grid, s.propagator);
  return propagate_lindblad(h, s.dephasing, s.initial, s.grid, s.propagator);
}

double final_efficiency(const EffectiveHamiltonian& h, double dephasing, const Eigen::VectorXcd& psi0,
                        const TimeGrid& grid, Propagator method) {
  TimeGrid one = grid;
  one.n_steps = 1;
  if (dephasing == 0.0) return propagate_pure(h, psi0, one, method).trap_pop.back();
  const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();
  return propagate_lindblad(h, dephasing, rho0, one, method).trap_pop.back();
}

double final_efficiency(const Scenario& s) {
  s.validate();
  const EffectiveHamiltonian h = s.hamiltonian();
  return final_efficiency(h, s.dephasing, resolve_initial_state(s.initial, h), s.grid, s.propagator);
}

}  // namespace ettrap
