#include <Eigen/LU>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "ettrap/dynamics.hpp"
#include "ettrap/errors.hpp"
#include "ettrap/ode.hpp"

namespace ettrap {

namespace {

using cplx = std::complex<double>;
const cplx kI{0.0, 1.0};

// (1 - e^{-z}) / z
cplx phi1(cplx z) {
  if (std::abs(z) < 1e-4) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  return (1.0 - std::exp(-z)) / z;
}

void check_normalised(const Eigen::VectorXcd& psi0, int n) {
  if (psi0.size() != n) throw std::invalid_argument("initial state has the wrong dimension");
  if (!psi0.allFinite()) throw std::invalid_argument("initial state is not finite");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state must have unit norm");
}

Trajectory make_pure_trajectory(const EffectiveHamiltonian& h, const TimeGrid& grid) {
  Trajectory tr;
  tr.mode = Trajectory::Mode::Pure;
  tr.times = grid.samples();
  tr.kappa = h.kappa;
  tr.trap_site = h.trap_site;
  tr.amplitudes.reserve(tr.times.size());
  tr.trap_pop.reserve(tr.times.size());
  tr.vacuum_pop.reserve(tr.times.size());
  return tr;
}

Trajectory pure_spectral(const EffectiveHamiltonian& h, const ModeSet& modes, const Eigen::VectorXcd& psi0,
                         const TimeGrid& grid) {
  Trajectory tr = make_pure_trajectory(h, grid);
  tr.method_used = Propagator::Spectral;
  const int n = h.size();
  const Eigen::MatrixXcd& v = modes.vectors;
  const Eigen::VectorXcd a = v.partialPivLu().solve(psi0);
  const Eigen::MatrixXcd gamma = h.vacuum_rates().cast<cplx>();
  const Eigen::MatrixXcd bv = v.adjoint() * gamma * v;
  Eigen::MatrixXcd bt = h.kappa * v.row(h.trap_site).adjoint() * v.row(h.trap_site);
  // weights w_nm = conj(a_n) a_m B_nm, frequencies omega_nm = lambda_m - conj(lambda_n)
  Eigen::MatrixXcd wv(n, n), wt(n, n), omega(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx c = std::conj(a[i]) * a[j];
      wv(i, j) = c * bv(i, j);
      wt(i, j) = c * bt(i, j);
      omega(i, j) = modes.eigenvalues[j] - std::conj(modes.eigenvalues[i]);
    }
  for (const double t : tr.times) {
    const Eigen::VectorXcd phase = (-kI * t * modes.eigenvalues.array()).exp().matrix();
    tr.amplitudes.push_back(v * a.cwiseProduct(phase));
    cplx pv{0.0, 0.0}, pt{0.0, 0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx integral = t * phi1(kI * omega(i, j) * t);
        pv += wv(i, j) * integral;
        pt += wt(i, j) * integral;
      }
    tr.trap_pop.push_back(pt.real());
    tr.vacuum_pop.push_back(pv.real());
  }
  return tr;
}

Trajectory pure_adaptive(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0, const TimeGrid& grid) {
  Trajectory tr = make_pure_trajectory(h, grid);
  tr.method_used = Propagator::Adaptive;
  const int n = h.size();
  const Eigen::MatrixXcd hm = h.matrix;
  const Eigen::MatrixXcd gamma = h.vacuum_rates().cast<cplx>();
  const double kappa = h.kappa;
  const int site = h.trap_site;
  ode::Rhs rhs = [&, n](double, const ode::State& y, ode::State& dy) {
    const auto psi = y.head(n);
    dy.head(n) = -kI * (hm * psi);
    dy[n] = kappa * std::norm(psi[site]);
    dy[n + 1] = psi.dot(gamma * psi).real();
  };
  ode::State y0 = ode::State::Zero(n + 2);
  y0.head(n) = psi0;
  ode::DormandPrince solver(rhs, {grid.rtol, grid.atol});
  for (const auto& y : solver.integrate_to_grid(y0, tr.times)) {
    tr.amplitudes.push_back(y.head(n));
    tr.trap_pop.push_back(y[n].real());
    tr.vacuum_pop.push_back(y[n + 1].real());
  }
  return tr;
}

}  // namespace

Trajectory propagate_pure(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                          Propagator method) {
  grid.validate();
  check_normalised(psi0, h.size());
  if (method == Propagator::Adaptive) return pure_adaptive(h, psi0, grid);
  const ModeSet modes = eigendecompose(h.matrix);
  if (method == Propagator::Auto && !(modes.condition_number < kSpectralConditionLimit))
    return pure_adaptive(h, psi0, grid);
  return pure_spectral(h, modes, psi0, grid);
}

Trajectory propagate_pure(const EffectiveHamiltonian& h, const InitialState& psi0, const TimeGrid& grid,
                          Propagator method) {
  return propagate_pure(h, resolve_initial_state(psi0, h), grid, method);
}

Eigen::VectorXcd evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi, double t) {
  if (psi.size() != h.size()) throw std::invalid_argument("state has the wrong dimension");
  const ModeSet modes = eigendecompose(h.matrix);
  if (modes.condition_number < kSpectralConditionLimit) {
    const Eigen::VectorXcd a = modes.vectors.partialPivLu().solve(psi);
    const Eigen::VectorXcd phase = (-kI * t * modes.eigenvalues.array()).exp().matrix();
    return modes.vectors * a.cwiseProduct(phase);
  }
  const Eigen::MatrixXcd generator = -kI * t * h.matrix;
  return generator.exp() * psi;
}

double survival_probability(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0, double t) {
  check_normalised(psi0, h.size());
  if (t < 0.0) throw std::invalid_argument("survival probability needs t >= 0");
  return std::norm(psi0.dot(evolve(h, psi0, t)));
}

}  // namespace ettrap
