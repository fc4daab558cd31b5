#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ettrap/hamiltonian.hpp"
#include "ettrap/initial_state.hpp"
#include "ettrap/spectra.hpp"

namespace ettrap {

/// Uniform output grid t_k = k t_max / n_steps, k = 0..n_steps (n_steps + 1 samples).
struct TimeGrid {
  double t_max = 10.0;
  int n_steps = 1000;
  double rtol = 1e-9;  ///< adaptive integration only
  double atol = 1e-12;

  std::vector<double> samples() const;
  void validate() const;
};

enum class Propagator {
  Auto,      ///< spectral when the eigenbasis is well conditioned, adaptive otherwise
  Spectral,  ///< eigendecomposition (pure) / exact matrix exponential (density)
  Adaptive,  ///< embedded Runge-Kutta 5(4)
};

/// Eigenbasis condition number above which Auto switches to adaptive integration.
inline constexpr double kSpectralConditionLimit = 1e8;

struct Trajectory {
  enum class Mode { Pure, Density };
  Mode mode = Mode::Pure;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> amplitudes;  ///< Pure
  std::vector<Eigen::MatrixXcd> densities;   ///< Density: single-excitation block, |psi><psi| convention
  std::vector<double> trap_pop;
  std::vector<double> vacuum_pop;
  double kappa = 0.0;
  int trap_site = 0;  ///< zero-based
  Propagator method_used = Propagator::Spectral;

  std::size_t samples() const noexcept { return times.size(); }
  int sites() const;
  Eigen::MatrixXcd density(std::size_t k) const;
  double chain_population(std::size_t k) const;
  double site_population(std::size_t k, int site) const;
  /// |tr rho + p_T + p_V - 1| at sample k.
  double ledger_error(std::size_t k) const;
};

/// psi(t) = exp(-i H t) psi0 with trap and vacuum populations integrated alongside.
/// Throws std::invalid_argument for a non-normalised psi0, NumericalError on
/// integrator failure.
Trajectory propagate_pure(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                          Propagator method = Propagator::Auto);
Trajectory propagate_pure(const EffectiveHamiltonian& h, const InitialState& psi0, const TimeGrid& grid,
                          Propagator method = Propagator::Auto);

/// d rho/dt = -i (H rho - rho H^dagger) - dephasing * (1 - delta_ij) rho_ij.
/// rho0 must be Hermitian, positive semidefinite and have trace <= 1.
/// Spectral (the default for Auto) uses the exact exponential of the augmented
/// generator for one output step.
Trajectory propagate_lindblad(const EffectiveHamiltonian& h, double dephasing, const Eigen::MatrixXcd& rho0,
                              const TimeGrid& grid, Propagator method = Propagator::Auto);
Trajectory propagate_lindblad(const EffectiveHamiltonian& h, double dephasing, const InitialState& psi0,
                              const TimeGrid& grid, Propagator method = Propagator::Auto);

/// p_T(tau), linearly interpolated between output samples. Throws std::out_of_range
/// when tau lies outside the grid.
double trap_efficiency(const Trajectory& traj, double at_time);

/// |<psi0| exp(-i H t) |psi0>|^2.
double survival_probability(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0, double t);

/// exp(-i H t) psi, spectral when well conditioned, matrix exponential otherwise.
Eigen::VectorXcd evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi, double t);

/// Eigenmodes of h with the trap and detuning removed (the chain Hamiltonian).
ModeSet chain_eigenbasis(const EffectiveHamiltonian& h);

/// tau_n(t) = int_0^t <v_n| rho |v_n> dt' (trapezoid rule) for every mode in `modes`.
Eigen::VectorXd mean_residence_time(const Trajectory& traj, const ModeSet& modes, double up_to);

}  // namespace ettrap
